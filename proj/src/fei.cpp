#include "symcone/fei.hpp"

#include "symcone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symcone {

namespace {

constexpr std::uint64_t kConstructionSeed = 0x5eedc0de;
constexpr int kConstructionPairs = 16;

void require_logarithmic(const LogCauchyFn& fn, const MultAlgorithm& w, const char* label) {
    Sampler s(SamplerConfig{w.algebra(), kConstructionSeed, 0.05, kConstructionPairs});
    double worst = 0.0;
    for (int i = 0; i < kConstructionPairs; ++i) {
        const Element x = s.sample_V(0.2, 3.0);
        const Element y = s.sample_V(0.2, 3.0);
        const double scale = 1.0 + std::abs(fn(w.apply(x, y)));
        worst = std::max(worst, std::abs(wlog_residual(fn, w, x, y)) / scale);
    }
    if (worst > kDefectPassTol) {
        std::ostringstream msg;
        msg << label << " = " << fn.describe() << " is not " << w.name()
            << "-logarithmic (relative residual " << worst << ")";
        throw ConstructionError(msg.str());
    }
}

} // namespace

const char* to_string(Provenance p) noexcept {
    switch (p) {
    case Provenance::SynthesizedTheorem: return "theorem";
    case Provenance::SynthesizedCor1: return "cor1";
    case Provenance::SynthesizedCor3: return "cor3";
    case Provenance::SynthesizedMixed: return "mixed";
    case Provenance::Opaque: return "opaque";
    }
    return "?";
}

double constant_sum_defect(const Constants& c) noexcept {
    return std::abs(c[0] + c[1] - c[2] - c[3]);
}

SolutionQuadruple build_quadruple(const LogCauchyFn& h1, const LogCauchyFn& h2,
                                  const LogCauchyFn& h3, const Constants& C,
                                  const MultAlgorithm& w, const MultAlgorithm& wt,
                                  Provenance provenance) {
    const AlgebraDescriptor& alg = w.algebra();
    if (!(wt.algebra() == alg) || !(h1.algebra() == alg) || !(h2.algebra() == alg) ||
        !(h3.algebra() == alg)) {
        throw ConstructionError("quadruple components must share one algebra");
    }
    const double scale = 1.0 + std::abs(C[0]) + std::abs(C[1]) + std::abs(C[2]) + std::abs(C[3]);
    if (constant_sum_defect(C) > 1e-9 * scale) {
        throw ConstructionError("constants violate C1 + C2 = C3 + C4");
    }
    require_logarithmic(h1, w, "h1");
    require_logarithmic(h1, wt, "h1");
    require_logarithmic(h2, wt, "h2");
    require_logarithmic(h3, w, "h3");

    const Element e = Element::identity(alg);
    const LinearOperator we = w.w_e();
    const LinearOperator wte = wt.w_e();

    SolutionQuadruple q{
        [=](const Element& x) { return h1(e - x) + h2(x) + h3(e - x) + C[0]; },
        [=](const Element& x) {
            const Element wx = we(x);
            return h1(e - wx) + h3(wx) + C[1];
        },
        [=](const Element& x) { return h1(e - x) + h2(e - x) + h3(x) + C[2]; },
        [=](const Element& x) {
            const Element wx = wte(x);
            return h1(e - wx) + h2(wx) + C[3];
        },
        w,
        wt,
        provenance,
        QuadrupleComponents{h1, h2, h3, C},
    };
    return q;
}

SolutionQuadruple cor1_quadruple(const AlgebraDescriptor& algebra, const std::array<double, 3>& kappa,
                                 const Constants& C) {
    const MultAlgorithm w1 = MultAlgorithm::sqrt_p(algebra);
    return build_quadruple(LogCauchyFn::det_log(algebra, kappa[0]),
                           LogCauchyFn::det_log(algebra, kappa[1]),
                           LogCauchyFn::det_log(algebra, kappa[2]), C, w1, w1,
                           Provenance::SynthesizedCor1);
}

SolutionQuadruple cor3_quadruple(const AlgebraDescriptor& algebra, const Eigen::VectorXd& s1,
                                 const Eigen::VectorXd& s2, const Eigen::VectorXd& s3,
                                 const Constants& C) {
    const MultAlgorithm w2 = MultAlgorithm::cholesky(algebra);
    return build_quadruple(LogCauchyFn::power_log(algebra, s1), LogCauchyFn::power_log(algebra, s2),
                           LogCauchyFn::power_log(algebra, s3), C, w2, w2,
                           Provenance::SynthesizedCor3);
}

SolutionQuadruple mixed_quadruple(const AlgebraDescriptor& algebra, double kappa1, double kappa2,
                                  const Eigen::VectorXd& s3, const Constants& C) {
    return build_quadruple(LogCauchyFn::det_log(algebra, kappa1),
                           LogCauchyFn::det_log(algebra, kappa2),
                           LogCauchyFn::power_log(algebra, s3), C, MultAlgorithm::cholesky(algebra),
                           MultAlgorithm::sqrt_p(algebra), Provenance::SynthesizedMixed);
}

SolutionQuadruple opaque(const SolutionQuadruple& q) {
    SolutionQuadruple out = q;
    out.provenance = Provenance::Opaque;
    out.components.reset();
    return out;
}

SolutionQuadruple swapped(const SolutionQuadruple& q) {
    SolutionQuadruple out{q.h, q.k, q.f, q.g, q.wt, q.w, Provenance::Opaque, std::nullopt};
    return out;
}

SolutionQuadruple perturb_f(const SolutionQuadruple& q, RealFn bump) {
    SolutionQuadruple out = opaque(q);
    out.f = [f = q.f, bump = std::move(bump)](const Element& x) { return f(x) + bump(x); };
    return out;
}

bool in_D0(const Element& x, const Element& y, double margin) {
    return membership(x, Region::D, margin) && membership(y, Region::D, margin) &&
           membership(x + y, Region::D, margin);
}

double fei_residual(const SolutionQuadruple& q, const Element& x, const Element& y) {
    require_same_algebra(x, y);
    if (!in_D0(x, y)) {
        throw DomainError("fei_residual: (x, y) is not in D0");
    }
    const Element e = Element::identity(x.algebra());
    const Element gx = q.w.divide(e - x, y);
    const Element ky = q.wt.divide(e - y, x);
    return q.f(x) + q.g(gx) - q.h(y) - q.k(ky);
}

ResidualReport fei_residual_sweep(const SolutionQuadruple& q, const SamplerConfig& cfg) {
    Sampler sampler(cfg);
    ResidualReport rep;
    rep.seed = cfg.seed;
    rep.samples = cfg.count;
    rep.residuals.reserve(cfg.count);
    double total = 0.0;
    for (int i = 0; i < cfg.count; ++i) {
        auto [x, y] = sampler.sample_D0_pair();
        const double r = fei_residual(q, x, y);
        rep.residuals.push_back(r);
        total += std::abs(r);
        if (!rep.worst_pair || std::abs(r) > rep.max_abs) {
            rep.max_abs = std::abs(r);
            rep.worst_pair.emplace(std::move(x), std::move(y));
        }
    }
    rep.mean_abs = cfg.count > 0 ? total / cfg.count : 0.0;
    return rep;
}

// --- scalar ------------------------------------------------------------------

ScalarQuadruple maksa_quadruple(const std::array<double, 3>& kappa, const Constants& C) {
    const double scale = 1.0 + std::abs(C[0]) + std::abs(C[1]) + std::abs(C[2]) + std::abs(C[3]);
    if (constant_sum_defect(C) > 1e-12 * scale) {
        throw ConstructionError("constants violate C1 + C2 = C3 + C4");
    }
    const double k1 = kappa[0];
    const double k2 = kappa[1];
    const double k3 = kappa[2];
    return ScalarQuadruple{
        [=](double x) { return k1 * std::log(1 - x) + k2 * std::log(x) + k3 * std::log(1 - x) + C[0]; },
        [=](double x) { return k1 * std::log(1 - x) + k3 * std::log(x) + C[1]; },
        [=](double x) { return k1 * std::log(1 - x) + k2 * std::log(1 - x) + k3 * std::log(x) + C[2]; },
        [=](double x) { return k1 * std::log(1 - x) + k2 * std::log(x) + C[3]; },
    };
}

double maksa_residual(const ScalarQuadruple& q, double x, double y) {
    if (!(x > 0.0 && y > 0.0 && x + y < 1.0)) {
        throw DomainError("maksa_residual: (x, y) is not in D0 = {x, y, x + y in (0, 1)}");
    }
    return q.F(x) + q.G(y / (1.0 - x)) - q.H(y) - q.K(x / (1.0 - y));
}

ScalarQuadruple scalar_restriction(const SolutionQuadruple& q) {
    const Element e = Element::identity(q.algebra());
    return ScalarQuadruple{
        [f = q.f, e](double a) { return f(a * e); },
        [g = q.g, e](double a) { return g(a * e); },
        [h = q.h, e](double a) { return h(a * e); },
        [k = q.k, e](double a) { return k(a * e); },
    };
}

ReductionResult reduction_residual(const SolutionQuadruple& q, const Eigen::MatrixXd& u,
                                   const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const AlgebraDescriptor& alg = q.algebra();
    if (!alg.is_sym_real() || q.w.kind() != MultKind::SqrtP || q.wt.kind() != MultKind::SqrtP) {
        throw UnsupportedError("reduction_residual needs w = w~ = w1 on a SymReal algebra");
    }
    const int r = alg.rank();
    if (u.rows() != r || u.cols() != r || x.size() != r || y.size() != r) {
        throw DomainError("reduction_residual: shapes do not match the rank");
    }
    if ((u.transpose() * u - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("reduction_residual: u is not orthogonal");
    }
    for (int i = 0; i < r; ++i) {
        if (!(x(i) > 0.0 && y(i) > 0.0 && x(i) + y(i) < 1.0)) {
            throw DomainError("reduction_residual: (x, y) is not in the component-wise D0");
        }
    }

    auto lift = [&](const Eigen::VectorXd& v) {
        const Eigen::MatrixXd m = u * v.asDiagonal() * u.transpose();
        return Element::from_matrix(alg, 0.5 * (m + m.transpose()));
    };
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(r);

    ReductionResult out;
    out.matrix_residual = fei_residual(q, lift(x), lift(y));
    out.componentwise_residual = q.f(lift(x)) + q.g(lift(y.cwiseQuotient(ones - x))) -
                                 q.h(lift(y)) - q.k(lift(x.cwiseQuotient(ones - y)));
    out.difference = std::abs(out.matrix_residual - out.componentwise_residual);
    return out;
}

} // namespace symcone
