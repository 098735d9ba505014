#pragma once

// Concrete Euclidean Jordan algebras and their primitives.
//
// Two simple algebras are supported:
//   * SymReal(r): real symmetric r x r matrices, x o y = (xy + yx) / 2.
//     Coordinates are the packed upper triangle, row by row:
//     (x00, x01, ..., x0{r-1}, x11, x12, ..., x{r-1}{r-1}).
//   * Lorentz(n): R^{n+1} with (x o y) = (<x, y>, x0 ybar + y0 xbar).
//
// The inner product is Trace(x o y) on SymReal and the plain dot product on
// Lorentz. On packed coordinates this is a weighted dot product with weight 2
// on off-diagonal entries; see AlgebraDescriptor::inner_weights().

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace symcone {

enum class AlgebraKind { SymReal, Lorentz };

class AlgebraDescriptor {
public:
    static AlgebraDescriptor sym_real(int rank);
    static AlgebraDescriptor lorentz(int spatial_dim);

    AlgebraKind kind() const noexcept { return kind_; }
    bool is_sym_real() const noexcept { return kind_ == AlgebraKind::SymReal; }
    int rank() const noexcept { return rank_; }
    int vector_dim() const noexcept { return dim_; }
    // r for SymReal, n for Lorentz.
    int parameter() const noexcept { return param_; }

    // "sym:<r>" or "lorentz:<n>".
    std::string name() const;

    // Position of entry (i, j) of a SymReal element in packed coordinates.
    int packed_index(int i, int j) const;

    Eigen::VectorXd inner_weights() const;

    friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;

private:
    AlgebraDescriptor(AlgebraKind kind, int param, int rank, int dim)
        : kind_(kind), param_(param), rank_(rank), dim_(dim) {}

    AlgebraKind kind_;
    int param_;
    int rank_;
    int dim_;
};

class Element {
public:
    Element(AlgebraDescriptor algebra, Eigen::VectorXd coords);

    static Element identity(const AlgebraDescriptor& algebra);
    static Element zero(const AlgebraDescriptor& algebra);
    // SymReal only; reads the upper triangle.
    static Element from_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& m);
    static Element diagonal(const AlgebraDescriptor& algebra, const Eigen::VectorXd& d);

    const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
    const Eigen::VectorXd& coords() const noexcept { return coords_; }
    double operator[](int i) const { return coords_(i); }

    // SymReal only.
    Eigen::MatrixXd to_matrix() const;

    Element& operator+=(const Element& other);
    Element& operator-=(const Element& other);
    Element& operator*=(double s);

    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(double s, Element a) { return a *= s; }
    friend Element operator*(Element a, double s) { return a *= s; }
    friend Element operator-(Element a) { return a *= -1.0; }

private:
    AlgebraDescriptor algebra_;
    Eigen::VectorXd coords_;
};

// Dense operator on coordinates. Elements of G, K, L(x), P(x) and w(x) all
// live here.
class LinearOperator {
public:
    LinearOperator(AlgebraDescriptor algebra, Eigen::MatrixXd matrix);

    static LinearOperator identity(const AlgebraDescriptor& algebra);
    // Materializes a linear map by applying it to the coordinate basis.
    static LinearOperator from_map(const AlgebraDescriptor& algebra,
                                   const std::function<Element(const Element&)>& map);

    const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

    Element operator()(const Element& x) const;
    LinearOperator operator*(const LinearOperator& rhs) const;
    LinearOperator inverse() const;
    double determinant() const;

private:
    AlgebraDescriptor algebra_;
    Eigen::MatrixXd matrix_;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;        // descending
    std::vector<Element> idempotents;   // idempotents[i] belongs to eigenvalues[i]
};

enum class Region { Cone, D };

inline constexpr double kDefaultConeMargin = 1e-12;
inline constexpr double kSpectralResidualTol = 1e-10;

void require_same_algebra(const Element& a, const Element& b);

double inner(const Element& a, const Element& b);
double norm(const Element& x);
double trace(const Element& x);

Element jordan_product(const Element& a, const Element& b);
Element square(const Element& x);

// L(x): y -> x o y.
LinearOperator multiplication_operator(const Element& x);
// P(x) = 2 L(x)^2 - L(x^2).
LinearOperator quad_rep(const Element& x);
// P(x) y without materializing the operator.
Element quad_apply(const Element& x, const Element& y);

SpectralDecomposition spectral_decompose(const Element& x);
Eigen::VectorXd eigenvalues(const Element& x);
// sum_i fn(lambda_i) c_i
Element spectral_map(const Element& x, const std::function<double(double)>& fn);

double determinant(const Element& x);
Element inverse(const Element& x);

bool membership(const Element& x, Region region, double margin = kDefaultConeMargin);
// Throws DomainError unless x is in V (resp. D).
void require_cone(const Element& x, const char* what);
void require_D(const Element& x, const char* what);

Element sqrt_element(const Element& x);
// x^p for x in V.
Element power(const Element& x, double p);

// Lower-triangular t with x = t t^T, no pivoting. SymReal, x in V.
Eigen::MatrixXd cholesky_factor(const Element& x);

// log of the leading principal minors Delta_1..Delta_r of x (SymReal, x in V).
Eigen::VectorXd log_leading_minors(const Element& x);
// Delta_s(x) = Delta_1^{s1-s2} ... Delta_r^{sr}.
double power_function(const Element& x, const Eigen::VectorXd& s);
double log_power_function(const Element& x, const Eigen::VectorXd& s);

// Element of K acting by y -> o y o^T (SymReal, o is r x r orthogonal) or by
// rotating the spatial part (Lorentz, o is n x n orthogonal).
LinearOperator conjugation_operator(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& o);

// Max of |k e - e|, the isometry defect and the Jordan-automorphism defect on
// basis pairs. Zero (up to rounding) iff k is in K.
double k_membership_defect(const LinearOperator& k);

// Frobenius norm of L(a)L(b) - L(b)L(a); zero iff a and b operator-commute.
double commutator_norm(const Element& a, const Element& b);

} // namespace symcone
