#include "symcone/sampler.hpp"

#include "symcone/errors.hpp"

#include <cmath>
#include <numbers>

namespace symcone {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Sampler::Sampler(SamplerConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (!(cfg_.eigen_margin > 0.0 && cfg_.eigen_margin < 0.5)) {
        throw ConstructionError("sampler eigen_margin must lie in (0, 1/2)");
    }
}

Sampler Sampler::derive(std::uint64_t stream) const {
    SamplerConfig c = cfg_;
    c.seed = derive_seed(cfg_.seed, stream);
    return Sampler(c);
}

Eigen::MatrixXd Sampler::random_orthogonal(int n) {
    Eigen::MatrixXd g(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) g(i, j) = rng_.normal();
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column signs so the distribution is Haar.
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
}

Element Sampler::with_spectrum(const Eigen::VectorXd& lambda) {
    const AlgebraDescriptor& alg = cfg_.algebra;
    if (alg.is_sym_real()) {
        const Eigen::MatrixXd u = random_orthogonal(alg.rank());
        const Eigen::MatrixXd m = u * lambda.asDiagonal() * u.transpose();
        return Element::from_matrix(alg, 0.5 * (m + m.transpose()));
    }
    const int n = alg.parameter();
    Eigen::VectorXd dir(n);
    do {
        for (int i = 0; i < n; ++i) dir(i) = rng_.normal();
    } while (dir.norm() < 1e-8);
    dir.normalize();
    Eigen::VectorXd c(n + 1);
    c(0) = 0.5 * (lambda(0) + lambda(1));
    c.tail(n) = 0.5 * (lambda(0) - lambda(1)) * dir;
    return Element(alg, std::move(c));
}

Element Sampler::sample_V(double lo, double hi) {
    Eigen::VectorXd lambda(cfg_.algebra.rank());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = rng_.uniform(lo, hi);
    return with_spectrum(lambda);
}

Element Sampler::sample_D() {
    return sample_V(cfg_.eigen_margin, 1.0 - cfg_.eigen_margin);
}

std::pair<Element, Element> Sampler::sample_D0_pair() {
    Element x = sample_D();
    const Element z = sample_D();
    const Element e = Element::identity(cfg_.algebra);
    Element y = quad_apply(sqrt_element(e - x), z);
    return {std::move(x), std::move(y)};
}

Element Sampler::sample_general() {
    Eigen::VectorXd c(cfg_.algebra.vector_dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng_.normal();
    return Element(cfg_.algebra, std::move(c));
}

LinearOperator Sampler::random_k() {
    const AlgebraDescriptor& alg = cfg_.algebra;
    const int n = alg.is_sym_real() ? alg.rank() : alg.parameter();
    return conjugation_operator(alg, random_orthogonal(n));
}

std::vector<std::pair<double, double>> scalar_grid(int count, double margin) {
    if (count < 1) throw ConstructionError("scalar_grid needs count >= 1");
    if (!(margin > 0.0 && margin < 1.0 / 3.0)) {
        throw ConstructionError("scalar_grid margin must lie in (0, 1/3)");
    }
    std::vector<std::pair<double, double>> out;
    if (count == 1) {
        out.emplace_back(margin, margin);
        return out;
    }
    const double step = (1.0 - 3.0 * margin) / (count - 1);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; i + j < count; ++j) {
            out.emplace_back(margin + i * step, margin + j * step);
        }
    }
    return out;
}

} // namespace symcone
