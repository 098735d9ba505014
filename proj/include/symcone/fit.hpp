#pragma once

// Least-squares fits used by recovery: limits as alpha -> 0 and the
// log det / log Delta_s families.

#include "symcone/algebra.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace symcone {

struct LimitEstimate {
    double constant_part = 0.0;
    double log_slope = 0.0;
    double fit_residual = 0.0;
    std::vector<double> alpha_grid;
};

// alpha_j = 2^{-j}, j = 4..16.
std::vector<double> default_alpha_grid();

inline constexpr int kDefaultCorrectionOrder = 3;

// Fits v(alpha) ~ c + kappa log alpha + sum_{m=1}^{order} a_m alpha^m on the
// grid and returns (c, kappa). The polynomial terms absorb the analytic
// remainder so that c is the limit as alpha -> 0; order 0 is the bare
// two-parameter model. Non-finite values raise NumericalError naming alpha.
LimitEstimate limit_extrapolate(const std::function<double(double)>& v,
                                const std::vector<double>& alpha_grid = default_alpha_grid(),
                                int correction_order = kDefaultCorrectionOrder);

struct DetLogFit {
    double kappa = 0.0;
    double residual = 0.0;   // max abs deviation
};

// value ~ kappa log det x
DetLogFit fit_det_log(const std::vector<std::pair<Element, double>>& samples);

struct PowerFit {
    Eigen::VectorXd s;
    double residual = 0.0;   // max abs deviation
};

// value ~ sum_k (s_k - s_{k+1}) log Delta_k(x), s_{r+1} = 0.
PowerFit fit_power_vector(const std::vector<std::pair<Element, double>>& samples, int rank);

} // namespace symcone
