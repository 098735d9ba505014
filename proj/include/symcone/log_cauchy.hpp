#pragma once

// w-logarithmic Cauchy functions: f(x) + f(w(e)y) = f(w(x)y) on V x V.
//
// Continuous members used here are kappa log det x (w-logarithmic for every
// multiplication algorithm) and log Delta_s(x) (w-logarithmic for the
// triangular algorithm), plus finite sums.

#include "symcone/algebra.hpp"
#include "symcone/mult_algorithm.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace symcone {

enum class LogForm { DetLog, PowerLog, Sum };

class LogCauchyFn {
public:
    static LogCauchyFn det_log(const AlgebraDescriptor& algebra, double kappa);
    // SymReal only; s has length rank.
    static LogCauchyFn power_log(const AlgebraDescriptor& algebra, Eigen::VectorXd s);
    static LogCauchyFn sum(const AlgebraDescriptor& algebra, std::vector<LogCauchyFn> parts);
    static LogCauchyFn zero(const AlgebraDescriptor& algebra) { return det_log(algebra, 0.0); }

    const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
    LogForm form() const noexcept { return form_; }
    double kappa() const noexcept { return kappa_; }
    const Eigen::VectorXd& s() const noexcept { return s_; }
    const std::vector<LogCauchyFn>& parts() const noexcept { return parts_; }

    // Throws DomainError outside V.
    double operator()(const Element& x) const;

    // c with f(alpha e) = c log alpha.
    double scalar_slope() const;

    // Equivalent power vector on SymReal (kappa log det = log Delta_{(kappa,...,kappa)}).
    Eigen::VectorXd power_vector() const;

    // Option-string form: "detlog:<k>", "powerlog:<s1,...>", "sum:[a;b]".
    std::string describe() const;

private:
    LogCauchyFn(AlgebraDescriptor algebra, LogForm form) : algebra_(algebra), form_(form) {}

    AlgebraDescriptor algebra_;
    LogForm form_;
    double kappa_ = 0.0;
    Eigen::VectorXd s_;
    std::vector<LogCauchyFn> parts_;
};

inline double eval(const LogCauchyFn& fn, const Element& x) { return fn(x); }

// log det x, for x in V.
double log_det(const Element& x);

// f(x) + f(w(e)y) - f(w(x)y)
double wlog_residual(const LogCauchyFn& fn, const MultAlgorithm& w, const Element& x,
                     const Element& y);

using RealFn = std::function<double(const Element&)>;

enum class Verdict { Pass, Inconclusive, Fail };

inline constexpr double kDefectPassTol = 1e-8;
inline constexpr double kDefectFailTol = 1e-2;

Verdict classify_defect(double defect) noexcept;

struct PexiderFit {
    LogCauchyFn f;
    double a0 = 0.0;
    double b0 = 0.0;
    double fit_residual = 0.0;
    // max over samples of |a - f - a0|, |b - f o w(e) - b0|, |c - f - a0 - b0|
    double consistency_residual = 0.0;
};

struct PexiderResult {
    // max |a(x) + b(y) - c(w(x)y)|
    double residual = 0.0;
    std::optional<PexiderFit> recovered;
};

// Checks a(x) + b(y) = c(w(x)y) on the sample pairs; when the residual is
// within tol, fits the w-logarithmic part f and the constants a0 = a(e),
// b0 = b(e).
PexiderResult pexider_check(const RealFn& a, const RealFn& b, const RealFn& c,
                            const MultAlgorithm& w,
                            const std::vector<std::pair<Element, Element>>& samples,
                            double tol = kDefectPassTol);

// max |f(kx) - f(x)| over all (k, x). Each k must lie in K.
double k_invariance_defect(const LogCauchyFn& fn, const std::vector<LinearOperator>& k_samples,
                           const std::vector<Element>& x_samples);

} // namespace symcone
