#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcone/errors.hpp"
#include "symcone/fit.hpp"
#include "symcone/log_cauchy.hpp"
#include "symcone/sampler.hpp"

#include <cmath>
#include <limits>

using namespace symcone;

namespace {

std::vector<std::pair<Element, double>> table(const AlgebraDescriptor& a, const LogCauchyFn& f, int n,
                                              double noise = 0.0) {
    Sampler s(SamplerConfig{a, 19});
    std::vector<std::pair<Element, double>> out;
    for (int i = 0; i < n; ++i) {
        const Element x = s.sample_V(0.2, 3.0);
        out.emplace_back(x, f(x) + noise * (2.0 * s.rng().uniform() - 1.0));
    }
    return out;
}

} // namespace

TEST_CASE("default grid") {
    const auto g = default_alpha_grid();
    REQUIRE(g.size() == 13);
    CHECK(g.front() == std::ldexp(1.0, -4));
    CHECK(g.back() == std::ldexp(1.0, -16));
}

TEST_CASE("limit of c + kappa log alpha") {
    const LimitEstimate est = limit_extrapolate([](double a) { return 3.0 + 2.0 * std::log(a); });
    CHECK(std::abs(est.constant_part - 3.0) <= 1e-12);
    CHECK(std::abs(est.log_slope - 2.0) <= 1e-12);
    CHECK(est.fit_residual <= 1e-12);
    const LimitEstimate bare = limit_extrapolate([](double a) { return 3.0 + 2.0 * std::log(a); },
                                                 default_alpha_grid(), 0);
    CHECK(std::abs(bare.constant_part - 3.0) <= 1e-12);
}

TEST_CASE("analytic remainder vanishes in the limit") {
    const auto v = [](double a) { return 5.0 + a; };
    const LimitEstimate corrected = limit_extrapolate(v);
    CHECK(std::abs(corrected.constant_part - 5.0) <= 1e-12);
    CHECK(std::abs(corrected.log_slope) <= 1e-12);
    // without corrections the alpha term leaks into both parameters
    const LimitEstimate bare = limit_extrapolate(v, default_alpha_grid(), 0);
    CHECK(std::abs(bare.constant_part - 5.0) > 1e-3);
    const LimitEstimate curved = limit_extrapolate([](double a) { return -1.0 + 0.5 * std::log(a) + std::log1p(-a); });
    CHECK(std::abs(curved.constant_part + 1.0) <= 1e-7);
    CHECK(std::abs(curved.log_slope - 0.5) <= 1e-7);
}

TEST_CASE("bare model converges monotonically as the grid refines") {
    const auto v = [](double a) { return 1.0 + 0.7 * std::log(a) + std::log1p(-3.0 * a); };
    double prev = std::numeric_limits<double>::infinity();
    for (int lo : {4, 5, 6, 7}) {
        std::vector<double> grid;
        for (int j = lo; j <= lo + 12; ++j) grid.push_back(std::ldexp(1.0, -j));
        const double err = std::abs(limit_extrapolate(v, grid, 0).constant_part - 1.0);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("limit errors") {
    CHECK_THROWS_AS(limit_extrapolate([](double a) { return a < 1e-4 ? std::nan("") : 1.0; }), NumericalError);
    CHECK_THROWS(limit_extrapolate([](double) { return 1.0; }, {0.5}));
    CHECK_THROWS(limit_extrapolate([](double) { return 1.0; }, {0.5, -0.1, 0.01}));
}

TEST_CASE("det-log fits") {
    const AlgebraDescriptor s2 = AlgebraDescriptor::sym_real(2);
    const DetLogFit exact = fit_det_log(table(s2, LogCauchyFn::det_log(s2, 3.0), 50));
    CHECK(std::abs(exact.kappa - 3.0) <= 1e-12);
    CHECK(exact.residual <= 1e-12);
    const DetLogFit noisy = fit_det_log(table(s2, LogCauchyFn::det_log(s2, 3.0), 200, 1e-8));
    CHECK(std::abs(noisy.kappa - 3.0) <= 1e-7);
    const DetLogFit wrong = fit_det_log(table(s2, LogCauchyFn::power_log(s2, Eigen::Vector2d(1, 0)), 200));
    CHECK(wrong.residual > 1e-2);

    const Element e = Element::identity(s2);
    CHECK_THROWS_AS(fit_det_log({{e, 0.0}, {e, 0.0}}), RankError);
}

TEST_CASE("power-vector fits") {
    const AlgebraDescriptor s2 = AlgebraDescriptor::sym_real(2);
    const PowerFit p = fit_power_vector(table(s2, LogCauchyFn::power_log(s2, Eigen::Vector2d(2, 1)), 50), 2);
    CHECK((p.s - Eigen::Vector2d(2, 1)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(p.residual <= 1e-12);

    const AlgebraDescriptor s3 = AlgebraDescriptor::sym_real(3);
    const PowerFit d = fit_power_vector(table(s3, LogCauchyFn::det_log(s3, -0.4), 50), 3);
    CHECK((d.s - Eigen::Vector3d::Constant(-0.4)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(d.residual <= 1e-10);

    const Element e = Element::identity(s2);
    CHECK_THROWS_AS(fit_power_vector({{e, 0.0}, {2.0 * e, 1.0}}, 2), RankError);
}
