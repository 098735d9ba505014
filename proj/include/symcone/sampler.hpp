#pragma once

// Reproducible random elements of V, D and pairs in D0.

#include "symcone/algebra.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace symcone {

struct SamplerConfig {
    AlgebraDescriptor algebra;
    std::uint64_t seed = 0;
    // Spectra of D-samples stay inside (eigen_margin, 1 - eigen_margin).
    double eigen_margin = 0.05;
    int count = 1000;
};

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Deterministic across platforms: uniform and normal variates are built
// directly from mt19937_64 output rather than through the <random>
// distributions, whose algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

class Sampler {
public:
    explicit Sampler(SamplerConfig cfg);

    const SamplerConfig& config() const noexcept { return cfg_; }
    Rng& rng() noexcept { return rng_; }

    // Independent sampler whose seed is derived from this one's.
    Sampler derive(std::uint64_t stream) const;

    // Element of D with all eigenvalues in (margin, 1 - margin).
    Element sample_D();
    // (x, y) with x, y, x + y in D: x, z from D and y = P((e - x)^{1/2}) z.
    std::pair<Element, Element> sample_D0_pair();
    // Element of V with eigenvalues uniform in (lo, hi) and a random frame.
    Element sample_V(double lo, double hi);
    // Gaussian coordinates; not restricted to any region.
    Element sample_general();

    Eigen::MatrixXd random_orthogonal(int n);
    // Random element of K: orthogonal conjugation (SymReal) or spatial
    // rotation (Lorentz).
    LinearOperator random_k();

private:
    Element with_spectrum(const Eigen::VectorXd& lambda);

    SamplerConfig cfg_;
    Rng rng_;
};

// Triangular grid of (alpha, beta) with alpha, beta >= margin and
// alpha + beta <= 1 - margin; `count` points per axis.
std::vector<std::pair<double, double>> scalar_grid(int count, double margin);

} // namespace symcone
