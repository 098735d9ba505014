#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcone/errors.hpp"
#include "symcone/recovery.hpp"

#include <cmath>

using namespace symcone;

namespace {

const AlgebraDescriptor S2 = AlgebraDescriptor::sym_real(2);
const AlgebraDescriptor S3 = AlgebraDescriptor::sym_real(3);

std::vector<Element> d_samples(const AlgebraDescriptor& a, int n) {
    Sampler s(SamplerConfig{a, 5});
    std::vector<Element> out;
    for (int i = 0; i < n; ++i) out.push_back(s.sample_D());
    return out;
}

} // namespace

TEST_CASE("h2 limit oracle") {
    const SolutionQuadruple q = opaque(cor1_quadruple(S2, {1, 0.7, -2}, {0.5, 1, 1, 0.5}));
    const ComponentFit h2 = recover_h2(q, d_samples(S2, 20));
    const Element half = Element::diagonal(S2, Eigen::Vector2d(0.5, 0.5));
    CHECK(std::abs(h2.fn(half) - 0.7 * std::log(0.25)) <= 1e-6);
    CHECK(h2.fn.form() == LogForm::DetLog);
    CHECK(h2.limit_residual <= 1e-7);
}

TEST_CASE("zero quadruple recovers zero components") {
    const LogCauchyFn z = LogCauchyFn::zero(S2);
    const MultAlgorithm w1 = MultAlgorithm::sqrt_p(S2);
    const SolutionQuadruple q = opaque(build_quadruple(z, z, z, {0, 0, 0, 0}, w1, w1));
    const ComponentFit h2 = recover_h2(q, d_samples(S2, 10));
    CHECK(std::abs(h2.fn.kappa()) <= 1e-10);

    const SolutionQuadruple c = opaque(build_quadruple(z, z, z, {1, 2, 0, 3}, w1, w1));
    const RecoveredComponents rec = recover_components(c, SamplerConfig{S2, 1, 0.05, 20});
    CHECK(rec.ok);
    CHECK(std::abs(rec.h1_fit.scalar_slope()) <= 1e-8);
    CHECK(std::abs(rec.h2_fit.scalar_slope()) <= 1e-8);
    CHECK(std::abs(rec.h3_fit.scalar_slope()) <= 1e-8);
    const Constants expected{1, 2, 0, 3};
    for (int i = 0; i < 4; ++i) CHECK(rec.C[i] == doctest::Approx(expected[i]).epsilon(1e-8));
}

TEST_CASE("cor1 round trip") {
    const RecoveredComponents rec =
        recover_components(opaque(cor1_quadruple(S3, {1, -0.5, 2}, {1, 1, 2, 0})), SamplerConfig{S3, 2, 0.05, 30});
    REQUIRE(rec.ok);
    CHECK(std::abs(rec.h1_fit.kappa() - 1.0) <= 1e-5);
    CHECK(std::abs(rec.h2_fit.kappa() + 0.5) <= 1e-5);
    CHECK(std::abs(rec.h3_fit.kappa() - 2.0) <= 1e-5);
    CHECK(std::abs(rec.C[0] + rec.C[1] - rec.C[2] - rec.C[3]) <= 1e-6);
    CHECK(rec.raw_constant_sum_defect <= 1e-6);
    CHECK(rec.reconstruction_residual <= 1e-5);
    CHECK(rec.scalar_cross_check <= 1e-6);
}

TEST_CASE("cor3 and mixed round trips") {
    const Eigen::Vector3d s1(2, 1, 0.4), s2(0.5, -1, 0.2), s3(1.5, 0.3, 0.1);
    const RecoveredComponents c3 =
        recover_components(opaque(cor3_quadruple(S3, s1, s2, s3, {0, 1, 0.5, 0.5})), SamplerConfig{S3, 3, 0.05, 30});
    REQUIRE(c3.ok);
    CHECK((c3.h1_fit.power_vector() - s1).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK((c3.h2_fit.power_vector() - s2).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK((c3.h3_fit.power_vector() - s3).cwiseAbs().maxCoeff() <= 1e-5);

    const RecoveredComponents mx =
        recover_components(opaque(mixed_quadruple(S3, 0.7, -0.4, s3, {0.3, 0.1, 0.2, 0.2})), SamplerConfig{S3, 4, 0.05, 30});
    REQUIRE(mx.ok);
    CHECK(mx.h1_fit.form() == LogForm::DetLog);
    CHECK(std::abs(mx.h1_fit.kappa() - 0.7) <= 1e-5);
    CHECK(std::abs(mx.h2_fit.kappa() + 0.4) <= 1e-5);
    CHECK((mx.h3_fit.power_vector() - s3).cwiseAbs().maxCoeff() <= 1e-5);
}

TEST_CASE("recovered components are homogeneous and logarithmic") {
    const Eigen::Vector2d s3(1, -0.5);
    const SolutionQuadruple q = mixed_quadruple(S2, 0.4, 1.1, s3, {0, 0, 0, 0});
    const RecoveredComponents rec = recover_components(opaque(q), SamplerConfig{S2, 6, 0.05, 20});
    REQUIRE(rec.ok);
    Sampler s(SamplerConfig{S2, 7});
    const Element e = Element::identity(S2);
    for (int i = 0; i < 50; ++i) {
        const Element x = s.sample_V(0.2, 3.0);
        const Element y = s.sample_V(0.2, 3.0);
        const double beta = s.rng().uniform(0.2, 5.0);
        for (const LogCauchyFn* h : {&rec.h1_fit, &rec.h2_fit, &rec.h3_fit}) {
            CHECK(std::abs((*h)(beta * x) - (*h)(x) - (*h)(beta * e)) <= 1e-6);
        }
        CHECK(std::abs(wlog_residual(rec.h1_fit, q.w, x, y)) <= 1e-6);
        CHECK(std::abs(wlog_residual(rec.h1_fit, q.wt, x, y)) <= 1e-6);
    }
}

TEST_CASE("Lorentz round trip") {
    const AlgebraDescriptor l4 = AlgebraDescriptor::lorentz(4);
    const RecoveredComponents rec =
        recover_components(opaque(cor1_quadruple(l4, {1, 0.7, -2}, {0, 0, 0, 0})), SamplerConfig{l4, 8, 0.05, 20});
    REQUIRE(rec.ok);
    CHECK(std::abs(rec.h2_fit.kappa() - 0.7) <= 1e-5);
}

TEST_CASE("non-solutions are reported, not recovered") {
    const SolutionQuadruple q = cor1_quadruple(S2, {1, 1, 1}, {0, 0, 0, 0});
    const SolutionQuadruple bad = perturb_f(q, [](const Element& x) { return 0.1 * inner(x, x) + std::sin(3.0 * x[1]); });
    const RecoveredComponents rec = recover_components(bad, SamplerConfig{S2, 9, 0.05, 20});
    CHECK_FALSE(rec.ok);
    CHECK_FALSE(rec.failures.empty());
    // an analytic bump passes the limit stage and fails reconstruction
    CHECK(rec.stages.front().ok);
    const SolutionQuadruple rough = perturb_f(q, [](const Element& x) { return 0.1 * std::sqrt(norm(x)); });
    CHECK_THROWS_AS(recover_h2(rough, d_samples(S2, 10)), NumericalError);
    CHECK_FALSE(recover_components(rough, SamplerConfig{S2, 9, 0.05, 20}).ok);
}

TEST_CASE("scalar restriction fit") {
    const ScalarQuadruple q = maksa_quadruple({1, -0.5, 2}, {1, 1, 2, 0});
    std::vector<double> al;
    for (int i = 1; i < 20; ++i) al.push_back(0.05 * i);
    const ScalarFit f = fit_scalar_restriction(q, al);
    CHECK(std::abs(f.kappa[0] - 1.0) <= 1e-10);
    CHECK(std::abs(f.kappa[1] + 0.5) <= 1e-10);
    CHECK(std::abs(f.kappa[2] - 2.0) <= 1e-10);
    CHECK(f.residual <= 1e-12);
    CHECK_THROWS_AS(fit_scalar_restriction(q, {0.5}), RankError);
}

TEST_CASE("json form") {
    const nlohmann::json d = to_json(LogCauchyFn::det_log(S2, 0.5));
    CHECK(d["form"] == "detlog");
    CHECK(d["params"][0] == 0.5);
    const nlohmann::json p = to_json(LogCauchyFn::power_log(S2, Eigen::Vector2d(1, 2)));
    CHECK(p["form"] == "powerlog");
    CHECK(p["params"].size() == 2);
    const RecoveredComponents rec =
        recover_components(opaque(cor1_quadruple(S2, {1, 1, 1}, {0, 0, 0, 0})), SamplerConfig{S2, 1, 0.05, 10});
    const nlohmann::json j = to_json(rec);
    for (const char* key : {"h1", "h2", "h3", "C", "residuals", "grid"}) CHECK(j.contains(key));
    CHECK(j["grid"].size() == default_alpha_grid().size());
}
