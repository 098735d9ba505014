#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symcone/algebra.hpp"
#include "symcone/errors.hpp"
#include "symcone/sampler.hpp"

#include <cmath>

using namespace symcone;

namespace {

const AlgebraDescriptor S2 = AlgebraDescriptor::sym_real(2);
const AlgebraDescriptor S3 = AlgebraDescriptor::sym_real(3);
const AlgebraDescriptor L2 = AlgebraDescriptor::lorentz(2);

Element sym(const AlgebraDescriptor& a, std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    Eigen::MatrixXd m(r, r);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return Element::from_matrix(a, m);
}

Element lor(std::initializer_list<double> v) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double x : v) c(i++) = x;
    return Element(AlgebraDescriptor::lorentz(static_cast<int>(v.size()) - 1), c);
}

double dist(const Element& a, const Element& b) { return (a.coords() - b.coords()).cwiseAbs().maxCoeff(); }

std::vector<AlgebraDescriptor> all_algebras() {
    return {AlgebraDescriptor::sym_real(1), S2, S3, AlgebraDescriptor::sym_real(5),
            L2, AlgebraDescriptor::lorentz(3), AlgebraDescriptor::lorentz(5)};
}

} // namespace

TEST_CASE("descriptor shapes and names") {
    CHECK(S3.vector_dim() == 6);
    CHECK(S3.rank() == 3);
    CHECK(L2.vector_dim() == 3);
    CHECK(L2.rank() == 2);
    CHECK(S2.name() == "sym:2");
    CHECK(L2.name() == "lorentz:2");
    CHECK(S3.packed_index(0, 0) == 0);
    CHECK(S3.packed_index(0, 2) == 2);
    CHECK(S3.packed_index(2, 1) == 4);
    CHECK_THROWS_AS(AlgebraDescriptor::sym_real(0), ConstructionError);
    CHECK_THROWS_AS(AlgebraDescriptor::lorentz(1), ConstructionError);
}

TEST_CASE("jordan product oracles") {
    const Element x = sym(S2, {{1, 0}, {0, 2}});
    const Element y = sym(S2, {{0, 1}, {1, 0}});
    CHECK(dist(jordan_product(x, y), sym(S2, {{0, 1.5}, {1.5, 0}})) < 1e-15);
    CHECK(dist(square(lor({2, 1, 0})), lor({5, 4, 0})) < 1e-15);
    for (const auto& a : all_algebras()) {
        Sampler s(SamplerConfig{a, 3});
        const Element z = s.sample_general();
        CHECK(dist(jordan_product(z, Element::identity(a)), z) < 1e-15);
    }
    CHECK_THROWS_AS(jordan_product(x, lor({1, 0, 0})), DomainError);
}

TEST_CASE("quadratic representation oracles") {
    const Element i2 = Element::identity(S2);
    CHECK(dist(quad_rep(sym(S2, {{2, 0}, {0, 3}}))(i2), sym(S2, {{4, 0}, {0, 9}})) < 1e-14);
    const Element y = lor({0.3, -1.2, 0.7});
    CHECK(dist(quad_rep(Element::identity(L2))(y), y) < 1e-15);
    CHECK(dist(quad_rep(2.0 * Element::identity(L2))(y), 4.0 * y) < 1e-14);
    Sampler s(SamplerConfig{S3, 11});
    for (int i = 0; i < 20; ++i) {
        const Element a = s.sample_general();
        const Element b = s.sample_general();
        const Eigen::MatrixXd m = a.to_matrix();
        CHECK(dist(quad_rep(a)(b), Element::from_matrix(S3, m * b.to_matrix() * m)) < 1e-12);
        CHECK(dist(quad_apply(a, b), quad_rep(a)(b)) < 1e-12);
    }
}

TEST_CASE("inverse oracles") {
    CHECK(dist(inverse(Element::identity(S3)), Element::identity(S3)) < 1e-15);
    CHECK(dist(inverse(sym(S2, {{2, 0}, {0, 4}})), sym(S2, {{0.5, 0}, {0, 0.25}})) < 1e-15);
    const Element xi = inverse(lor({2, 1, 0}));
    CHECK(dist(xi, lor({2.0 / 3.0, -1.0 / 3.0, 0})) < 1e-15);
    CHECK(dist(jordan_product(lor({2, 1, 0}), xi), Element::identity(L2)) < 1e-15);
    CHECK_THROWS_AS(inverse(lor({1, 1, 0})), SingularityError);
    CHECK_THROWS_AS(inverse(sym(S2, {{1, 0}, {0, 0}})), SingularityError);
}

TEST_CASE("spectral decomposition oracles") {
    const SpectralDecomposition se = spectral_decompose(Element::identity(S3));
    CHECK((se.eigenvalues.array() - 1.0).abs().maxCoeff() < 1e-15);

    const SpectralDecomposition sd = spectral_decompose(sym(S2, {{2, 0}, {0, 3}}));
    CHECK(sd.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(sd.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(dist(sd.idempotents[0], sym(S2, {{0, 0}, {0, 1}})) < 1e-14);
    CHECK(dist(sd.idempotents[1], sym(S2, {{1, 0}, {0, 0}})) < 1e-14);

    const SpectralDecomposition ld = spectral_decompose(lor({2, 1, 0}));
    CHECK(ld.eigenvalues(0) == doctest::Approx(3.0));
    CHECK(ld.eigenvalues(1) == doctest::Approx(1.0));
    CHECK(dist(ld.idempotents[0], lor({0.5, 0.5, 0})) < 1e-15);
    CHECK(dist(ld.idempotents[1], lor({0.5, -0.5, 0})) < 1e-15);

    // x-bar = 0: both eigenvalues x0, still a complete idempotent system
    const SpectralDecomposition dd = spectral_decompose(lor({1.5, 0, 0}));
    CHECK(dd.eigenvalues(0) == doctest::Approx(1.5));
    CHECK(dd.eigenvalues(1) == doctest::Approx(1.5));
    CHECK(dist(dd.idempotents[0] + dd.idempotents[1], Element::identity(L2)) < 1e-15);
}

TEST_CASE("spectral round trip and idempotent system") {
    for (const auto& a : all_algebras()) {
        Sampler s(SamplerConfig{a, 21});
        for (int i = 0; i < 50; ++i) {
            const Element x = s.sample_general();
            const SpectralDecomposition d = spectral_decompose(x);
            Element sum = Element::zero(a);
            Element rebuilt = Element::zero(a);
            for (std::size_t k = 0; k < d.idempotents.size(); ++k) {
                const Element& c = d.idempotents[k];
                CHECK(dist(square(c), c) < 1e-10);
                for (std::size_t l = k + 1; l < d.idempotents.size(); ++l) {
                    CHECK(norm(jordan_product(c, d.idempotents[l])) < 1e-10);
                }
                sum += c;
                rebuilt += d.eigenvalues(static_cast<Eigen::Index>(k)) * c;
            }
            CHECK(dist(sum, Element::identity(a)) < 1e-10);
            CHECK(norm(rebuilt - x) <= 1e-10 * std::max(1.0, norm(x)));
            for (Eigen::Index k = 1; k < d.eigenvalues.size(); ++k) {
                CHECK(d.eigenvalues(k - 1) >= d.eigenvalues(k));
            }
        }
    }
}

TEST_CASE("determinant, trace and membership oracles") {
    CHECK(determinant(Element::identity(S3)) == doctest::Approx(1.0));
    CHECK(determinant(lor({2, 1, 0})) == doctest::Approx(3.0));
    CHECK(determinant(sym(S2, {{2, 1}, {1, 3}})) == doctest::Approx(5.0));
    CHECK(trace(lor({2, 1, 0})) == doctest::Approx(4.0));
    CHECK(trace(Element::identity(S3)) == doctest::Approx(3.0));

    CHECK(membership(0.5 * Element::identity(S2), Region::D));
    CHECK_FALSE(membership(Element::identity(S2), Region::D));
    CHECK(membership(Element::identity(S2), Region::Cone));
    CHECK_FALSE(membership(sym(S2, {{0.5, 0}, {0, 1.2}}), Region::D));
    CHECK_FALSE(membership(lor({1, 0.5, 0}), Region::D));
    CHECK(membership(lor({0.5, 0.2, 0}), Region::D));
    CHECK_FALSE(membership(lor({1, 2, 0}), Region::Cone));
    CHECK_THROWS_AS(require_cone(lor({1, 2, 0}), "x"), DomainError);
}

TEST_CASE("square root and powers") {
    CHECK(dist(sqrt_element(Element::identity(S3)), Element::identity(S3)) < 1e-15);
    CHECK(dist(sqrt_element(sym(S2, {{4, 0}, {0, 9}})), sym(S2, {{2, 0}, {0, 3}})) < 1e-14);
    CHECK_THROWS_AS(sqrt_element(sym(S2, {{1, 0}, {0, -1}})), DomainError);
    for (const auto& a : all_algebras()) {
        Sampler s(SamplerConfig{a, 5});
        const Element v = s.sample_V(0.1, 4.0);
        const Element r = sqrt_element(v);
        CHECK(norm(square(r) - v) < 1e-12 * norm(v));
        CHECK(norm(power(v, -1.0) - inverse(v)) < 1e-11 * norm(inverse(v)));
        CHECK(norm(jordan_product(power(v, 0.3), power(v, 0.7)) - v) < 1e-12 * norm(v));
    }
}

TEST_CASE("generalized power function") {
    const Element x = sym(S2, {{2, 1}, {1, 3}});
    CHECK(power_function(x, Eigen::Vector2d(2, 1)) == doctest::Approx(10.0));
    CHECK(log_power_function(x, Eigen::Vector2d(2, 1)) == doctest::Approx(std::log(10.0)));
    CHECK(power_function(Element::identity(S3), Eigen::Vector3d(0.3, -2, 7)) == doctest::Approx(1.0));
    Sampler s(SamplerConfig{S3, 8});
    for (int i = 0; i < 10; ++i) {
        const Element v = s.sample_V(0.2, 3.0);
        CHECK(power_function(v, Eigen::Vector3d::Constant(1.7)) ==
              doctest::Approx(std::pow(determinant(v), 1.7)).epsilon(1e-12));
    }
    const Eigen::MatrixXd t = cholesky_factor(sym(S2, {{4, 2}, {2, 2}}));
    CHECK((t - (Eigen::Matrix2d() << 2, 0, 1, 1).finished()).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::VectorXd lm = log_leading_minors(x);
    CHECK(lm(0) == doctest::Approx(std::log(2.0)));
    CHECK(lm(1) == doctest::Approx(std::log(5.0)));
    CHECK_THROWS_AS(power_function(lor({2, 1, 0}), Eigen::Vector2d(1, 1)), UnsupportedError);
    CHECK_THROWS_AS(log_leading_minors(sym(S2, {{-1, 0}, {0, 1}})), DomainError);
}

TEST_CASE("P(x) inverse equals P(x^-1)") {
    for (const auto& a : all_algebras()) {
        Sampler s(SamplerConfig{a, 31});
        for (int i = 0; i < 50; ++i) {
            const Element x = s.sample_V(0.2, 3.0);
            const Eigen::MatrixXd lhs = quad_rep(x).inverse().matrix();
            const Eigen::MatrixXd rhs = quad_rep(inverse(x)).matrix();
            CHECK((lhs - rhs).norm() <= 1e-8 * rhs.norm());
        }
    }
}

TEST_CASE("Jordan axioms hold on random triples") {
    for (const auto& a : all_algebras()) {
        Sampler s(SamplerConfig{a, 41});
        const Element e = Element::identity(a);
        for (int i = 0; i < 200; ++i) {
            const Element x = s.sample_general();
            const Element y = s.sample_general();
            const Element z = s.sample_general();
            const double scale = norm(x) * norm(y);
            CHECK(norm(jordan_product(x, y) - jordan_product(y, x)) <= 1e-12 * scale);
            const Element x2 = square(x);
            CHECK(norm(jordan_product(x, jordan_product(x2, y)) - jordan_product(x2, jordan_product(x, y))) <=
                  1e-12 * scale * norm(x) * norm(x));
            CHECK(norm(jordan_product(e, x) - x) <= 1e-15 * norm(x));
            CHECK(std::abs(inner(x, jordan_product(y, z)) - inner(jordan_product(x, y), z)) <=
                  1e-12 * scale * norm(z));
        }
    }
}

TEST_CASE("K elements preserve the algebra") {
    for (const auto& a : {S3, AlgebraDescriptor::lorentz(4)}) {
        Sampler s(SamplerConfig{a, 51});
        const LinearOperator k = s.random_k();
        CHECK(k_membership_defect(k) < 1e-12);
        const Element x = s.sample_V(0.2, 3.0);
        CHECK(determinant(k(x)) == doctest::Approx(determinant(x)).epsilon(1e-12));
    }
    const LinearOperator scale(S2, 2.0 * Eigen::MatrixXd::Identity(3, 3));
    CHECK(k_membership_defect(scale) > 0.5);
}

TEST_CASE("commutator norm detects commuting pairs") {
    const Element x = sym(S2, {{1, 0}, {0, 2}});
    CHECK(commutator_norm(x, sym(S2, {{3, 0}, {0, -1}})) < 1e-15);
    CHECK(commutator_norm(x, sym(S2, {{0, 1}, {1, 0}})) > 0.1);
}
