#include "symcone/log_cauchy.hpp"

#include "symcone/errors.hpp"
#include "symcone/fit.hpp"
#include "symcone/format.hpp"

#include <algorithm>
#include <cmath>

namespace symcone {

LogCauchyFn LogCauchyFn::det_log(const AlgebraDescriptor& algebra, double kappa) {
    if (!std::isfinite(kappa)) throw ConstructionError("detlog coefficient must be finite");
    LogCauchyFn fn(algebra, LogForm::DetLog);
    fn.kappa_ = kappa;
    return fn;
}

LogCauchyFn LogCauchyFn::power_log(const AlgebraDescriptor& algebra, Eigen::VectorXd s) {
    if (!algebra.is_sym_real()) {
        throw UnsupportedError("powerlog requires a SymReal algebra, got " + algebra.name());
    }
    if (s.size() != algebra.rank()) {
        throw ConstructionError("powerlog vector length must equal the rank " +
                                std::to_string(algebra.rank()));
    }
    if (!s.allFinite()) throw ConstructionError("powerlog vector must be finite");
    LogCauchyFn fn(algebra, LogForm::PowerLog);
    fn.s_ = std::move(s);
    return fn;
}

LogCauchyFn LogCauchyFn::sum(const AlgebraDescriptor& algebra, std::vector<LogCauchyFn> parts) {
    for (const auto& p : parts) {
        if (!(p.algebra() == algebra)) {
            throw ConstructionError("sum parts must share the algebra " + algebra.name());
        }
    }
    LogCauchyFn fn(algebra, LogForm::Sum);
    fn.parts_ = std::move(parts);
    return fn;
}

double log_det(const Element& x) {
    if (x.algebra().is_sym_real()) {
        const Eigen::MatrixXd t = cholesky_factor(x);
        return 2.0 * t.diagonal().array().log().sum();
    }
    const Eigen::VectorXd ev = eigenvalues(x);
    if (!(ev.minCoeff() > 0.0)) throw DomainError("log_det: argument is not in the cone V");
    return std::log(ev(0)) + std::log(ev(1));
}

double LogCauchyFn::operator()(const Element& x) const {
    if (!(x.algebra() == algebra_)) {
        throw DomainError("function on " + algebra_.name() + " evaluated on " +
                          x.algebra().name());
    }
    switch (form_) {
    case LogForm::DetLog:
        return kappa_ * log_det(x);
    case LogForm::PowerLog:
        return log_power_function(x, s_);
    case LogForm::Sum: {
        require_cone(x, "log-Cauchy sum");
        double acc = 0.0;
        for (const auto& p : parts_) acc += p(x);
        return acc;
    }
    }
    return 0.0;
}

double LogCauchyFn::scalar_slope() const {
    switch (form_) {
    case LogForm::DetLog: return kappa_ * algebra_.rank();
    case LogForm::PowerLog: return s_.sum();
    case LogForm::Sum: {
        double acc = 0.0;
        for (const auto& p : parts_) acc += p.scalar_slope();
        return acc;
    }
    }
    return 0.0;
}

Eigen::VectorXd LogCauchyFn::power_vector() const {
    if (!algebra_.is_sym_real()) {
        throw UnsupportedError("power_vector requires a SymReal algebra");
    }
    switch (form_) {
    case LogForm::DetLog: return Eigen::VectorXd::Constant(algebra_.rank(), kappa_);
    case LogForm::PowerLog: return s_;
    case LogForm::Sum: {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(algebra_.rank());
        for (const auto& p : parts_) acc += p.power_vector();
        return acc;
    }
    }
    return {};
}

std::string LogCauchyFn::describe() const {
    switch (form_) {
    case LogForm::DetLog: return "detlog:" + format_real(kappa_);
    case LogForm::PowerLog: {
        std::string out = "powerlog:";
        for (Eigen::Index i = 0; i < s_.size(); ++i) {
            if (i) out += ',';
            out += format_real(s_(i));
        }
        return out;
    }
    case LogForm::Sum: {
        std::string out = "sum:[";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += ';';
            out += parts_[i].describe();
        }
        return out + "]";
    }
    }
    return {};
}

double wlog_residual(const LogCauchyFn& fn, const MultAlgorithm& w, const Element& x,
                     const Element& y) {
    return fn(x) + fn(w.w_e()(y)) - fn(w.apply(x, y));
}

Verdict classify_defect(double defect) noexcept {
    if (defect <= kDefectPassTol) return Verdict::Pass;
    if (defect >= kDefectFailTol) return Verdict::Fail;
    return Verdict::Inconclusive;
}

PexiderResult pexider_check(const RealFn& a, const RealFn& b, const RealFn& c,
                            const MultAlgorithm& w,
                            const std::vector<std::pair<Element, Element>>& samples, double tol) {
    PexiderResult out;
    for (const auto& [x, y] : samples) {
        out.residual = std::max(out.residual, std::abs(a(x) + b(y) - c(w.apply(x, y))));
    }
    if (!(out.residual <= tol) || samples.empty()) return out;

    const AlgebraDescriptor& alg = w.algebra();
    const Element e = Element::identity(alg);
    PexiderFit fit{LogCauchyFn::zero(alg), a(e), b(e), 0.0, 0.0};

    std::vector<std::pair<Element, double>> table;
    table.reserve(2 * samples.size());
    for (const auto& [x, y] : samples) {
        table.emplace_back(x, a(x) - fit.a0);
        table.emplace_back(y, a(y) - fit.a0);
    }
    bool all_zero = true;
    for (const auto& [x, v] : table) all_zero = all_zero && std::abs(v) <= tol;

    try {
        if (all_zero) {
            fit.fit_residual = 0.0;
        } else if (w.triangular()) {
            const PowerFit pf = fit_power_vector(table, alg.rank());
            fit.f = LogCauchyFn::power_log(alg, pf.s);
            fit.fit_residual = pf.residual;
        } else {
            const DetLogFit df = fit_det_log(table);
            fit.f = LogCauchyFn::det_log(alg, df.kappa);
            fit.fit_residual = df.residual;
        }
    } catch (const RankError&) {
        return out;
    }

    double consistency = 0.0;
    for (const auto& [x, y] : samples) {
        const Element wxy = w.apply(x, y);
        consistency = std::max(consistency, std::abs(a(x) - fit.f(x) - fit.a0));
        consistency = std::max(consistency, std::abs(b(y) - fit.f(w.w_e()(y)) - fit.b0));
        consistency = std::max(consistency, std::abs(c(wxy) - fit.f(wxy) - fit.a0 - fit.b0));
    }
    fit.consistency_residual = consistency;
    out.recovered = std::move(fit);
    return out;
}

double k_invariance_defect(const LogCauchyFn& fn, const std::vector<LinearOperator>& k_samples,
                           const std::vector<Element>& x_samples) {
    double defect = 0.0;
    for (const auto& k : k_samples) {
        if (k_membership_defect(k) > 1e-9) {
            throw DomainError("k_invariance_defect: operator is not in K");
        }
        for (const auto& x : x_samples) {
            defect = std::max(defect, std::abs(fn(k(x)) - fn(x)));
        }
    }
    return defect;
}

} // namespace symcone
