#include "symcone/fit.hpp"

#include "symcone/errors.hpp"
#include "symcone/log_cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symcone {

namespace {

// Solves min |A c - b| with column equilibration; throws RankError when A
// does not have full column rank.
Eigen::VectorXd least_squares(Eigen::MatrixXd a, const Eigen::VectorXd& b, const char* what) {
    Eigen::VectorXd scale(a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        const double m = a.col(j).cwiseAbs().maxCoeff();
        scale(j) = m > 0.0 ? m : 1.0;
        a.col(j) /= scale(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-12);
    if (qr.rank() < a.cols()) {
        throw RankError(std::string(what) + ": design matrix is rank deficient");
    }
    Eigen::VectorXd c = qr.solve(b);
    return c.cwiseQuotient(scale);
}

} // namespace

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int j = 4; j <= 16; ++j) g.push_back(std::ldexp(1.0, -j));
    return g;
}

LimitEstimate limit_extrapolate(const std::function<double(double)>& v,
                                const std::vector<double>& alpha_grid, int correction_order) {
    if (correction_order < 0) throw ConstructionError("correction order must be >= 0");
    const int params = 2 + correction_order;
    const auto n = static_cast<Eigen::Index>(alpha_grid.size());
    if (n < params + 1) {
        throw ConstructionError("alpha grid too short for the limit model");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(alpha_grid[i] > 0.0) || (i > 0 && !(alpha_grid[i] < alpha_grid[i - 1]))) {
            throw ConstructionError("alpha grid must be positive and strictly decreasing");
        }
    }

    Eigen::MatrixXd a(n, params);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double alpha = alpha_grid[i];
        double value = 0.0;
        try {
            value = v(alpha);
        } catch (const Error& err) {
            std::ostringstream msg;
            msg << "limit_extrapolate: evaluation failed at alpha = " << alpha << ": "
                << err.what();
            throw NumericalError(msg.str());
        }
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "limit_extrapolate: non-finite value at alpha = " << alpha;
            throw NumericalError(msg.str());
        }
        a(i, 0) = 1.0;
        a(i, 1) = std::log(alpha);
        double p = 1.0;
        for (int m = 1; m <= correction_order; ++m) {
            p *= alpha;
            a(i, 1 + m) = p;
        }
        b(i) = value;
    }

    const Eigen::VectorXd c = least_squares(a, b, "limit_extrapolate");
    LimitEstimate out;
    out.constant_part = c(0);
    out.log_slope = c(1);
    out.fit_residual = (a * c - b).cwiseAbs().maxCoeff();
    out.alpha_grid = alpha_grid;
    return out;
}

DetLogFit fit_det_log(const std::vector<std::pair<Element, double>>& samples) {
    if (samples.size() < 2) throw RankError("fit_det_log needs at least two samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::VectorXd l(n);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        l(i) = log_det(samples[i].first);
        v(i) = samples[i].second;
    }
    const double spread = l.maxCoeff() - l.minCoeff();
    if (!(spread > 1e-12 * std::max(1.0, l.cwiseAbs().maxCoeff()))) {
        throw RankError("fit_det_log: all samples share the same determinant");
    }
    DetLogFit out;
    out.kappa = l.dot(v) / l.squaredNorm();
    out.residual = (out.kappa * l - v).cwiseAbs().maxCoeff();
    return out;
}

PowerFit fit_power_vector(const std::vector<std::pair<Element, double>>& samples, int rank) {
    if (rank < 1) throw ConstructionError("fit_power_vector: rank must be >= 1");
    if (static_cast<int>(samples.size()) < rank) {
        throw RankError("fit_power_vector needs at least rank samples");
    }
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd a(n, rank);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (samples[i].first.algebra().rank() != rank || !samples[i].first.algebra().is_sym_real()) {
            throw UnsupportedError("fit_power_vector: samples must come from sym:" +
                                   std::to_string(rank));
        }
        a.row(i) = log_leading_minors(samples[i].first).transpose();
        v(i) = samples[i].second;
    }
    const Eigen::VectorXd diffs = least_squares(a, v, "fit_power_vector");
    PowerFit out;
    out.s.resize(rank);
    double acc = 0.0;
    for (int k = rank - 1; k >= 0; --k) {
        acc += diffs(k);
        out.s(k) = acc;
    }
    out.residual = (a * diffs - v).cwiseAbs().maxCoeff();
    return out;
}

} // namespace symcone
