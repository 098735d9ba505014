#include "symcone/mult_algorithm.hpp"

#include "symcone/errors.hpp"
#include "symcone/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace symcone {

namespace {

Element congruence(const Eigen::MatrixXd& t, const Element& y) {
    const Eigen::MatrixXd m = t * y.to_matrix() * t.transpose();
    return Element::from_matrix(y.algebra(), 0.5 * (m + m.transpose()));
}

// t^{-1} y t^{-T} for lower-triangular t.
Element inverse_congruence(const Eigen::MatrixXd& t, const Element& y) {
    const auto lower = t.triangularView<Eigen::Lower>();
    const Eigen::MatrixXd a = lower.solve(y.to_matrix());
    const Eigen::MatrixXd m = lower.solve(a.transpose()).transpose();
    return Element::from_matrix(y.algebra(), 0.5 * (m + m.transpose()));
}

void require_sym(const AlgebraDescriptor& alg, const char* what) {
    if (!alg.is_sym_real()) {
        throw UnsupportedError(std::string(what) + " requires a SymReal algebra, got " +
                               alg.name());
    }
}

bool use_sqrt_branch(const Element& x) {
    return trace(x) <= static_cast<double>(x.algebra().rank());
}

} // namespace

MultAlgorithm::MultAlgorithm(MultKind kind, AlgebraDescriptor algebra)
    : kind_(kind), algebra_(algebra), w_e_(LinearOperator::identity(algebra)) {}

MultAlgorithm MultAlgorithm::sqrt_p(const AlgebraDescriptor& algebra) {
    return MultAlgorithm(MultKind::SqrtP, algebra);
}

MultAlgorithm MultAlgorithm::cholesky(const AlgebraDescriptor& algebra) {
    require_sym(algebra, "Cholesky multiplication algorithm");
    return MultAlgorithm(MultKind::Cholesky, algebra);
}

MultAlgorithm MultAlgorithm::k_twist(const MultAlgorithm& base, const LinearOperator& k) {
    if (!(k.algebra() == base.algebra())) {
        throw ConstructionError("twist operator and base algorithm live on different algebras");
    }
    const double defect = k_membership_defect(k);
    if (defect > 1e-9) {
        std::ostringstream msg;
        msg << "twist operator is not in K (defect " << defect << ")";
        throw ConstructionError(msg.str());
    }
    MultAlgorithm w(MultKind::KTwist, base.algebra());
    w.base_ = std::make_shared<const MultAlgorithm>(base);
    w.k_ = k;
    w.k_inv_ = k.inverse();
    w.w_e_ = base.w_e() * k;
    return w;
}

MultAlgorithm MultAlgorithm::alpha_interp(const AlgebraDescriptor& algebra, double alpha) {
    require_sym(algebra, "alpha-interpolated multiplication algorithm");
    if (!(alpha >= 0.0 && alpha <= 0.5)) {
        throw ConstructionError("alpha must lie in [0, 1/2]");
    }
    MultAlgorithm w(MultKind::AlphaInterp, algebra);
    w.alpha_ = alpha;
    return w;
}

MultAlgorithm MultAlgorithm::patchwork(const AlgebraDescriptor& algebra) {
    require_sym(algebra, "patchwork multiplication algorithm");
    return MultAlgorithm(MultKind::PatchworkFixture, algebra);
}

std::string MultAlgorithm::name() const {
    switch (kind_) {
    case MultKind::SqrtP: return "w1";
    case MultKind::Cholesky: return "w2";
    case MultKind::KTwist: return "ktwist(" + base_->name() + ")";
    case MultKind::AlphaInterp: {
        std::ostringstream s;
        s << "alpha:" << alpha_;
        return s.str();
    }
    case MultKind::PatchworkFixture: return "patchwork";
    }
    return "?";
}

bool MultAlgorithm::triangular() const noexcept {
    switch (kind_) {
    case MultKind::Cholesky: return true;
    case MultKind::KTwist: return base_->triangular();
    case MultKind::AlphaInterp: return alpha_ == 0.0;
    default: return false;
    }
}

Element MultAlgorithm::apply(const Element& x, const Element& y) const {
    if (!(x.algebra() == algebra_) || !(y.algebra() == algebra_)) {
        throw DomainError("multiplication algorithm " + name() + " on " + algebra_.name() +
                          " got arguments from another algebra");
    }
    switch (kind_) {
    case MultKind::SqrtP:
        return quad_apply(sqrt_element(x), y);
    case MultKind::Cholesky:
        return congruence(cholesky_factor(x), y);
    case MultKind::KTwist:
        return base_->apply(x, (*k_)(y));
    case MultKind::AlphaInterp: {
        const Eigen::MatrixXd t = cholesky_factor(power(x, 1.0 - 2.0 * alpha_));
        return quad_apply(power(x, alpha_), congruence(t, y));
    }
    case MultKind::PatchworkFixture:
        require_cone(x, "patchwork");
        return use_sqrt_branch(x) ? quad_apply(sqrt_element(x), y)
                                  : congruence(cholesky_factor(x), y);
    }
    throw UnsupportedError("unknown multiplication algorithm kind");
}

Element MultAlgorithm::divide(const Element& x, const Element& y) const {
    if (!(x.algebra() == algebra_) || !(y.algebra() == algebra_)) {
        throw DomainError("division algorithm " + name() + " on " + algebra_.name() +
                          " got arguments from another algebra");
    }
    switch (kind_) {
    case MultKind::SqrtP:
        return quad_apply(power(x, -0.5), y);
    case MultKind::Cholesky:
        return inverse_congruence(cholesky_factor(x), y);
    case MultKind::KTwist:
        return (*k_inv_)(base_->divide(x, y));
    case MultKind::AlphaInterp: {
        const Eigen::MatrixXd t = cholesky_factor(power(x, 1.0 - 2.0 * alpha_));
        return inverse_congruence(t, quad_apply(power(x, -alpha_), y));
    }
    case MultKind::PatchworkFixture:
        require_cone(x, "patchwork");
        return use_sqrt_branch(x) ? quad_apply(power(x, -0.5), y)
                                  : inverse_congruence(cholesky_factor(x), y);
    }
    throw UnsupportedError("unknown multiplication algorithm kind");
}

LinearOperator MultAlgorithm::at(const Element& x) const {
    return LinearOperator::from_map(algebra_, [&](const Element& y) { return apply(x, y); });
}

LinearOperator MultAlgorithm::division_at(const Element& x) const {
    return LinearOperator::from_map(algebra_, [&](const Element& y) { return divide(x, y); });
}

Element w_apply(const MultAlgorithm& w, const Element& x, const Element& y) {
    return w.apply(x, y);
}

Element gw_apply(const MultAlgorithm& w, const Element& x, const Element& y) {
    return w.divide(x, y);
}

// --- condition C -------------------------------------------------------------

namespace {

double division_residual(const MultAlgorithm& w, const Element& x, const Element& target) {
    const Element e = Element::identity(w.algebra());
    return norm(w.divide(x, e) - target) / std::max(norm(target), 1e-300);
}

// Cholesky: g_w(x)e = (t^T t)^{-1}, so t^T t = target^{-1}. With J the
// reversal permutation and J target^{-1} J = l l^T, t = J l^T J.
Element cholesky_preimage(const Element& target) {
    const AlgebraDescriptor& alg = target.algebra();
    const int r = alg.rank();
    const Eigen::MatrixXd m = inverse(target).to_matrix();
    const Eigen::MatrixXd j = Eigen::MatrixXd::Identity(r, r).rowwise().reverse();
    const Eigen::MatrixXd l = cholesky_factor(Element::from_matrix(alg, j * m * j));
    const Eigen::MatrixXd t = j * l.transpose() * j;
    return Element::from_matrix(alg, t * t.transpose());
}

// Closed forms for the SqrtP and Cholesky kernels and their twists.
std::optional<Element> closed_form_preimage(const MultAlgorithm& w, const Element& target) {
    switch (w.kind()) {
    case MultKind::SqrtP:
        return inverse(target);
    case MultKind::Cholesky:
        return cholesky_preimage(target);
    case MultKind::KTwist: {
        // g_w(x)e = k^{-1} g_base(x)e, so solve the base problem for k target.
        return closed_form_preimage(*w.base(), (*w.twist())(target));
    }
    default:
        return std::nullopt;
    }
}

std::optional<Element> newton_preimage(const MultAlgorithm& w, const Element& target) {
    const AlgebraDescriptor& alg = w.algebra();
    const Element e = Element::identity(alg);
    const int d = alg.vector_dim();
    const double scale = std::max(1.0, norm(target));

    Element x = inverse(target);
    auto residual_vec = [&](const Element& z) -> Eigen::VectorXd {
        return w.divide(z, e).coords() - target.coords();
    };
    Eigen::VectorXd f = residual_vec(x);
    for (int iter = 0; iter < 60 && f.norm() > 1e-14 * scale; ++iter) {
        Eigen::MatrixXd jac(d, d);
        const double h = 1e-7 * std::max(1.0, x.coords().norm());
        for (int j = 0; j < d; ++j) {
            const Element step(alg, h * Eigen::VectorXd::Unit(d, j));
            jac.col(j) = (residual_vec(x + step) - residual_vec(x - step)) / (2.0 * h);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (!lu.isInvertible()) return std::nullopt;
        const Eigen::VectorXd delta = lu.solve(-f);
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 40; ++k, lambda *= 0.5) {
            const Element cand(alg, x.coords() + lambda * delta);
            if (!membership(cand, Region::Cone)) continue;
            const Eigen::VectorXd fc = residual_vec(cand);
            if (fc.norm() < f.norm()) {
                x = cand;
                f = fc;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return x;
}

} // namespace

SurjectivityResult solve_division_surjectivity(const MultAlgorithm& w, const Element& target) {
    require_cone(target, "solve_division_surjectivity");
    SurjectivityResult out;
    out.residual = std::numeric_limits<double>::infinity();

    std::optional<Element> cand = closed_form_preimage(w, target);
    if (!cand) {
        try {
            cand = newton_preimage(w, target);
        } catch (const Error&) {
            cand.reset();
        }
    }
    if (!cand || !membership(*cand, Region::Cone)) return out;

    out.residual = division_residual(w, *cand, target);
    if (out.residual <= kAxiomTol) {
        out.status = SurjectivityStatus::Solved;
        out.x = std::move(cand);
    }
    return out;
}

// --- conditions A-C ----------------------------------------------------------

bool AxiomReport::passes(double tol) const noexcept {
    return axiom_ok && cond_A_max_defect <= tol && cond_B_ok && cond_C_ok &&
           we_in_K_defect <= tol;
}

AxiomReport check_axioms(const MultAlgorithm& w, int sample_count, std::uint64_t rng_seed) {
    AxiomReport rep;
    rep.samples_used = std::max(sample_count, 1);
    const AlgebraDescriptor& alg = w.algebra();
    const Element e = Element::identity(alg);
    Sampler base(SamplerConfig{alg, rng_seed, 0.05, rep.samples_used});

    // w(x)e = x
    {
        Sampler s = base.derive(0);
        for (int i = 0; i < rep.samples_used; ++i) {
            const Element x = s.sample_V(0.1, 3.0);
            rep.axiom_max_defect =
                std::max(rep.axiom_max_defect, norm(w.apply(x, e) - x) / norm(x));
        }
        rep.axiom_ok = rep.axiom_max_defect <= kAxiomTol;
    }

    // A: w(sx) = s w(x)
    {
        Sampler s = base.derive(1);
        for (int i = 0; i < rep.samples_used; ++i) {
            const Element x = s.sample_V(0.1, 3.0);
            const Element y = s.sample_V(0.1, 3.0);
            const double sc = std::exp(s.rng().uniform(std::log(0.1), std::log(10.0)));
            const Element wxy = w.apply(x, y);
            const double d = norm(w.apply(sc * x, y) - sc * wxy) / norm(wxy);
            rep.cond_A_max_defect = std::max(rep.cond_A_max_defect, d);
        }
    }

    // B: w(e + eps h) -> w(e), one-sided trend over shrinking eps
    {
        Sampler s = base.derive(2);
        const LinearOperator& we = w.w_e();
        std::vector<Element> dirs;
        std::vector<Element> ys;
        for (int i = 0; i < rep.samples_used; ++i) {
            Element h = s.sample_general();
            dirs.push_back((1.0 / norm(h)) * h);
            ys.push_back(s.sample_V(0.1, 3.0));
        }
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            double worst = 0.0;
            for (std::size_t i = 0; i < dirs.size(); ++i) {
                const Element moved = w.apply(e + eps * dirs[i], ys[i]);
                worst = std::max(worst, norm(moved - we(ys[i])) / norm(ys[i]));
            }
            rep.cond_B_trend.push_back(worst);
        }
        rep.cond_B_defect = rep.cond_B_trend.back();
        const double first = rep.cond_B_trend.front();
        rep.cond_B_ok = rep.cond_B_defect <= 1e-12 ||
                        (rep.cond_B_trend[1] < first && rep.cond_B_defect < rep.cond_B_trend[1] &&
                         rep.cond_B_defect <= 0.1 * first);
    }

    // C: x -> g_w(x)e onto V
    {
        Sampler s = base.derive(3);
        const int targets = std::min(rep.samples_used, 50);
        rep.cond_C_ok = true;
        for (int i = 0; i < targets; ++i) {
            const SurjectivityResult res = solve_division_surjectivity(w, s.sample_V(0.1, 3.0));
            if (res.status != SurjectivityStatus::Solved) {
                rep.cond_C_ok = false;
                rep.cond_C_unknown = true;
            }
        }
    }

    rep.we_in_K_defect = k_membership_defect(w.w_e());
    return rep;
}

} // namespace symcone
