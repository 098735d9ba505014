#pragma once

// Recovers (h1, h2, h3, C) from an opaque solution quadruple by running the
// alpha -> 0 limits numerically:
//
//   l1(x)  = lim f(alpha x) - k(alpha e)  = h2(x) + C1 - C4
//   l1'(y) = lim h(alpha y) - g(alpha e)  = h3(y) + C3 - C2
//   g(x) - h3(w_e x)                      = h1(e - w_e x) + C2
//
// and fitting each tabulated component inside the log det / log Delta_s
// families.

#include "symcone/fei.hpp"
#include "symcone/fit.hpp"
#include "symcone/log_cauchy.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace symcone {

struct RecoveryOptions {
    std::vector<double> alpha_grid = default_alpha_grid();
    int correction_order = kDefaultCorrectionOrder;
    double limit_tol = 1e-7;
    double fit_tol = 1e-6;
};

struct ComponentFit {
    LogCauchyFn fn;
    double fit_residual = 0.0;
    // Worst limit fit residual over the tabulated points.
    double limit_residual = 0.0;
};

// Fits tabulated values with power vectors when `triangular` (SymReal only),
// with kappa log det otherwise.
ComponentFit fit_log_cauchy(const std::vector<std::pair<Element, double>>& table, bool triangular);

// h2 = l1 - l1(e), fitted per the kind of w~. Throws NumericalError when a
// limit or the fit misses its tolerance.
ComponentFit recover_h2(const SolutionQuadruple& q, const std::vector<Element>& x_samples,
                        const RecoveryOptions& opts = {});
// h3 by the same route on the swapped equation, fitted per the kind of w.
ComponentFit recover_h3(const SolutionQuadruple& q, const std::vector<Element>& x_samples,
                        const RecoveryOptions& opts = {});

struct StageDiagnostics {
    std::string name;
    double limit_residual = 0.0;
    double fit_residual = 0.0;
    bool ok = true;
};

struct RecoveredComponents {
    LogCauchyFn h1_fit;
    LogCauchyFn h2_fit;
    LogCauchyFn h3_fit;
    // Projected onto C1 + C2 = C3 + C4; raw_constant_sum_defect is the
    // defect before projection.
    Constants C{};
    double raw_constant_sum_defect = 0.0;
    double reconstruction_residual = 0.0;
    // max |slope(h_i) - kappa_i| against a direct fit of the scalar restriction.
    double scalar_cross_check = 0.0;
    std::vector<StageDiagnostics> stages{};
    std::vector<double> alpha_grid{};
    bool ok = true;
    std::vector<std::string> failures{};
};

inline constexpr double kReconstructionTol = 1e-5;
inline constexpr double kConstantSumTol = 1e-6;

// Never throws on a failed stage: the partial result carries the failures.
RecoveredComponents recover_components(const SolutionQuadruple& q, const SamplerConfig& sweep,
                                       const RecoveryOptions& opts = {});

struct ScalarFit {
    std::array<double, 3> kappa{};
    Constants C{};
    double residual = 0.0;
};

// Joint least-squares fit of the scalar solution family to (F, G, H, K) on
// the given points of (0, 1).
ScalarFit fit_scalar_restriction(const ScalarQuadruple& q, const std::vector<double>& alphas);

nlohmann::json to_json(const LogCauchyFn& fn);
nlohmann::json to_json(const RecoveredComponents& rec);

} // namespace symcone
