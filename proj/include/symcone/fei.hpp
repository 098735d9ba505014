#pragma once

// Solution families of the fundamental equation of information
//
//     f(x) + g(g_w(e - x) y) = h(y) + k(g~_w(e - y) x),   (x, y) in D0,
//
// its scalar (Maksa) form on (0,1), and residual sweeps.

#include "symcone/algebra.hpp"
#include "symcone/log_cauchy.hpp"
#include "symcone/mult_algorithm.hpp"
#include "symcone/sampler.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace symcone {

enum class Provenance { SynthesizedTheorem, SynthesizedCor1, SynthesizedCor3, SynthesizedMixed, Opaque };

const char* to_string(Provenance p) noexcept;

using Constants = std::array<double, 4>;

struct QuadrupleComponents {
    LogCauchyFn h1;
    LogCauchyFn h2;
    LogCauchyFn h3;
    Constants C;
};

struct SolutionQuadruple {
    RealFn f;
    RealFn g;
    RealFn h;
    RealFn k;
    MultAlgorithm w;
    MultAlgorithm wt;
    Provenance provenance = Provenance::Opaque;
    // Present for synthesized quadruples only.
    std::optional<QuadrupleComponents> components;

    const AlgebraDescriptor& algebra() const noexcept { return w.algebra(); }
};

// |C1 + C2 - C3 - C4|
double constant_sum_defect(const Constants& c) noexcept;

// f(x) = h1(e-x) + h2(x) + h3(e-x) + C1
// g(x) = h1(e-w_e x) + h3(w_e x) + C2
// h(x) = h1(e-x) + h2(e-x) + h3(x) + C3
// k(x) = h1(e-w~_e x) + h2(w~_e x) + C4
//
// Requires C1 + C2 = C3 + C4, h1 w- and w~-logarithmic, h2 w~-logarithmic and
// h3 w-logarithmic; the latter are checked on a fixed sample set. Violations
// raise ConstructionError.
SolutionQuadruple build_quadruple(const LogCauchyFn& h1, const LogCauchyFn& h2,
                                  const LogCauchyFn& h3, const Constants& C,
                                  const MultAlgorithm& w, const MultAlgorithm& wt,
                                  Provenance provenance = Provenance::SynthesizedTheorem);

// h_i = kappa_i log det, w = w~ = w1 unless given.
SolutionQuadruple cor1_quadruple(const AlgebraDescriptor& algebra, const std::array<double, 3>& kappa,
                                 const Constants& C);
// h_i = log Delta_{s_i}, w = w~ = w2.
SolutionQuadruple cor3_quadruple(const AlgebraDescriptor& algebra, const Eigen::VectorXd& s1,
                                 const Eigen::VectorXd& s2, const Eigen::VectorXd& s3,
                                 const Constants& C);
// w = w2, w~ = w1: h1 = kappa1 log det, h2 = kappa2 log det, h3 = log Delta_{s3}.
SolutionQuadruple mixed_quadruple(const AlgebraDescriptor& algebra, double kappa1, double kappa2,
                                  const Eigen::VectorXd& s3, const Constants& C);

// Same functions with the components hidden.
SolutionQuadruple opaque(const SolutionQuadruple& q);
// (f, g, h, k, w, w~) -> (h, k, f, g, w~, w); maps solutions to solutions.
SolutionQuadruple swapped(const SolutionQuadruple& q);
// f -> f + bump; the result is opaque.
SolutionQuadruple perturb_f(const SolutionQuadruple& q, RealFn bump);

bool in_D0(const Element& x, const Element& y, double margin = kDefaultConeMargin);

// f(x) + g(g_w(e-x)y) - h(y) - k(g~_w(e-y)x); DomainError unless (x, y) in D0.
double fei_residual(const SolutionQuadruple& q, const Element& x, const Element& y);

struct ResidualReport {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    std::optional<std::pair<Element, Element>> worst_pair;
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<double> residuals;
};

// cfg.count pairs from Sampler(cfg).sample_D0_pair().
ResidualReport fei_residual_sweep(const SolutionQuadruple& q, const SamplerConfig& cfg);

// --- scalar equation on (0, 1) ---------------------------------------------

using ScalarFn = std::function<double(double)>;

struct ScalarQuadruple {
    ScalarFn F;
    ScalarFn G;
    ScalarFn H;
    ScalarFn K;
};

// F(x) = k1 log(1-x) + k2 log x + k3 log(1-x) + C1, G(x) = k1 log(1-x) + k3 log x + C2,
// H(x) = k1 log(1-x) + k2 log(1-x) + k3 log x + C3, K(x) = k1 log(1-x) + k2 log x + C4.
ScalarQuadruple maksa_quadruple(const std::array<double, 3>& kappa, const Constants& C);

// F(x) + G(y/(1-x)) - H(y) - K(x/(1-y)) for x, y, x + y in (0, 1).
double maksa_residual(const ScalarQuadruple& q, double x, double y);

// F(alpha) = f(alpha e) and so on.
ScalarQuadruple scalar_restriction(const SolutionQuadruple& q);

struct ReductionResult {
    double matrix_residual = 0.0;
    double componentwise_residual = 0.0;
    double difference = 0.0;
};

// Compares the equation at (u diag(x) u^T, u diag(y) u^T) with the
// component-wise equation for f_u(v) = f(u diag(v) u^T). Needs w = w~ = w1 on
// SymReal.
ReductionResult reduction_residual(const SolutionQuadruple& q, const Eigen::MatrixXd& u,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& y);

} // namespace symcone
