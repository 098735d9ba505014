#include "symcone/algebra.hpp"

#include "symcone/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace symcone {

namespace {

void require_sym_real(const AlgebraDescriptor& a, const char* what) {
    if (!a.is_sym_real()) {
        throw UnsupportedError(std::string(what) + ": requires a SymReal algebra, got " + a.name());
    }
}

Element lorentz_product(const Element& a, const Element& b) {
    const Eigen::VectorXd& x = a.coords();
    const Eigen::VectorXd& y = b.coords();
    const Eigen::Index n = x.size() - 1;
    Eigen::VectorXd z(x.size());
    z(0) = x.dot(y);
    z.tail(n) = x(0) * y.tail(n) + y(0) * x.tail(n);
    return Element(a.algebra(), std::move(z));
}

} // namespace

// --- AlgebraDescriptor -------------------------------------------------------

AlgebraDescriptor AlgebraDescriptor::sym_real(int rank) {
    if (rank < 1) {
        throw ConstructionError("SymReal rank must be >= 1, got " + std::to_string(rank));
    }
    return AlgebraDescriptor(AlgebraKind::SymReal, rank, rank, rank * (rank + 1) / 2);
}

AlgebraDescriptor AlgebraDescriptor::lorentz(int spatial_dim) {
    if (spatial_dim < 2) {
        throw ConstructionError("Lorentz spatial dimension must be >= 2, got " +
                                std::to_string(spatial_dim));
    }
    return AlgebraDescriptor(AlgebraKind::Lorentz, spatial_dim, 2, spatial_dim + 1);
}

std::string AlgebraDescriptor::name() const {
    return (is_sym_real() ? "sym:" : "lorentz:") + std::to_string(param_);
}

int AlgebraDescriptor::packed_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 contribute r, r-1, ..., r-i+1 entries
    return i * rank_ - i * (i - 1) / 2 + (j - i);
}

Eigen::VectorXd AlgebraDescriptor::inner_weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(dim_);
    if (is_sym_real()) {
        for (int i = 0; i < rank_; ++i) {
            for (int j = i + 1; j < rank_; ++j) w(packed_index(i, j)) = 2.0;
        }
    }
    return w;
}

// --- Element -----------------------------------------------------------------

Element::Element(AlgebraDescriptor algebra, Eigen::VectorXd coords)
    : algebra_(algebra), coords_(std::move(coords)) {
    if (coords_.size() != algebra_.vector_dim()) {
        std::ostringstream msg;
        msg << "element of " << algebra_.name() << " needs " << algebra_.vector_dim()
            << " coordinates, got " << coords_.size();
        throw DomainError(msg.str());
    }
    if (!coords_.allFinite()) {
        throw DomainError("element coordinates must be finite");
    }
}

Element Element::identity(const AlgebraDescriptor& algebra) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(algebra.vector_dim());
    if (algebra.is_sym_real()) {
        for (int i = 0; i < algebra.rank(); ++i) c(algebra.packed_index(i, i)) = 1.0;
    } else {
        c(0) = 1.0;
    }
    return Element(algebra, std::move(c));
}

Element Element::zero(const AlgebraDescriptor& algebra) {
    return Element(algebra, Eigen::VectorXd::Zero(algebra.vector_dim()));
}

Element Element::from_matrix(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& m) {
    require_sym_real(algebra, "Element::from_matrix");
    const int r = algebra.rank();
    if (m.rows() != r || m.cols() != r) {
        throw DomainError("matrix shape does not match " + algebra.name());
    }
    Eigen::VectorXd c(algebra.vector_dim());
    for (int i = 0; i < r; ++i) {
        for (int j = i; j < r; ++j) c(algebra.packed_index(i, j)) = m(i, j);
    }
    return Element(algebra, std::move(c));
}

Element Element::diagonal(const AlgebraDescriptor& algebra, const Eigen::VectorXd& d) {
    require_sym_real(algebra, "Element::diagonal");
    return from_matrix(algebra, d.asDiagonal().toDenseMatrix());
}

Eigen::MatrixXd Element::to_matrix() const {
    require_sym_real(algebra_, "Element::to_matrix");
    const int r = algebra_.rank();
    Eigen::MatrixXd m(r, r);
    for (int i = 0; i < r; ++i) {
        for (int j = i; j < r; ++j) {
            m(i, j) = coords_(algebra_.packed_index(i, j));
            m(j, i) = m(i, j);
        }
    }
    return m;
}

Element& Element::operator+=(const Element& other) {
    require_same_algebra(*this, other);
    coords_ += other.coords_;
    return *this;
}

Element& Element::operator-=(const Element& other) {
    require_same_algebra(*this, other);
    coords_ -= other.coords_;
    return *this;
}

Element& Element::operator*=(double s) {
    coords_ *= s;
    return *this;
}

// --- LinearOperator ----------------------------------------------------------

LinearOperator::LinearOperator(AlgebraDescriptor algebra, Eigen::MatrixXd matrix)
    : algebra_(algebra), matrix_(std::move(matrix)) {
    const int d = algebra_.vector_dim();
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw DomainError("operator on " + algebra_.name() + " must be square of size " +
                          std::to_string(d));
    }
    if (!matrix_.allFinite()) {
        throw DomainError("operator entries must be finite");
    }
}

LinearOperator LinearOperator::identity(const AlgebraDescriptor& algebra) {
    const int d = algebra.vector_dim();
    return LinearOperator(algebra, Eigen::MatrixXd::Identity(d, d));
}

LinearOperator LinearOperator::from_map(const AlgebraDescriptor& algebra,
                                        const std::function<Element(const Element&)>& map) {
    const int d = algebra.vector_dim();
    Eigen::MatrixXd m(d, d);
    for (int j = 0; j < d; ++j) {
        Eigen::VectorXd basis = Eigen::VectorXd::Unit(d, j);
        m.col(j) = map(Element(algebra, std::move(basis))).coords();
    }
    return LinearOperator(algebra, std::move(m));
}

Element LinearOperator::operator()(const Element& x) const {
    if (!(x.algebra() == algebra_)) {
        throw DomainError("operator on " + algebra_.name() + " applied to element of " +
                          x.algebra().name());
    }
    return Element(algebra_, matrix_ * x.coords());
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
    if (!(rhs.algebra_ == algebra_)) {
        throw DomainError("cannot compose operators on different algebras");
    }
    return LinearOperator(algebra_, matrix_ * rhs.matrix_);
}

LinearOperator LinearOperator::inverse() const {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix_);
    if (!lu.isInvertible()) {
        throw SingularityError("operator is not invertible");
    }
    return LinearOperator(algebra_, lu.inverse());
}

double LinearOperator::determinant() const { return matrix_.determinant(); }

// --- products and operators --------------------------------------------------

void require_same_algebra(const Element& a, const Element& b) {
    if (!(a.algebra() == b.algebra())) {
        throw DomainError("algebra mismatch: " + a.algebra().name() + " vs " + b.algebra().name());
    }
}

double inner(const Element& a, const Element& b) {
    require_same_algebra(a, b);
    return (a.algebra().inner_weights().array() * a.coords().array() * b.coords().array()).sum();
}

double norm(const Element& x) { return std::sqrt(inner(x, x)); }

double trace(const Element& x) {
    if (x.algebra().is_sym_real()) return x.to_matrix().trace();
    // Tr(x) = lambda_1 + lambda_2 = 2 x0
    return 2.0 * x[0];
}

Element jordan_product(const Element& a, const Element& b) {
    require_same_algebra(a, b);
    if (a.algebra().is_sym_real()) {
        const Eigen::MatrixXd x = a.to_matrix();
        const Eigen::MatrixXd y = b.to_matrix();
        return Element::from_matrix(a.algebra(), 0.5 * (x * y + y * x));
    }
    return lorentz_product(a, b);
}

Element square(const Element& x) { return jordan_product(x, x); }

LinearOperator multiplication_operator(const Element& x) {
    return LinearOperator::from_map(x.algebra(),
                                    [&x](const Element& y) { return jordan_product(x, y); });
}

LinearOperator quad_rep(const Element& x) {
    const LinearOperator l = multiplication_operator(x);
    const LinearOperator l2 = multiplication_operator(square(x));
    return LinearOperator(x.algebra(), 2.0 * l.matrix() * l.matrix() - l2.matrix());
}

Element quad_apply(const Element& x, const Element& y) {
    require_same_algebra(x, y);
    if (x.algebra().is_sym_real()) {
        const Eigen::MatrixXd m = x.to_matrix();
        return Element::from_matrix(x.algebra(), m * y.to_matrix() * m);
    }
    return 2.0 * jordan_product(x, jordan_product(x, y)) - jordan_product(square(x), y);
}

// --- spectral ----------------------------------------------------------------

SpectralDecomposition spectral_decompose(const Element& x) {
    const AlgebraDescriptor& alg = x.algebra();
    SpectralDecomposition out;
    if (alg.is_sym_real()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.to_matrix());
        if (es.info() != Eigen::Success) {
            throw NumericalError("symmetric eigensolver did not converge");
        }
        const int r = alg.rank();
        out.eigenvalues.resize(r);
        out.idempotents.reserve(r);
        for (int i = 0; i < r; ++i) {
            const int src = r - 1 - i;   // solver returns ascending order
            out.eigenvalues(i) = es.eigenvalues()(src);
            const Eigen::VectorXd v = es.eigenvectors().col(src);
            out.idempotents.push_back(Element::from_matrix(alg, v * v.transpose()));
        }
    } else {
        const Eigen::Index n = x.coords().size() - 1;
        const Eigen::VectorXd spatial = x.coords().tail(n);
        const double len = spatial.norm();
        Eigen::VectorXd dir = Eigen::VectorXd::Unit(n, 0);
        if (len > 0.0) dir = spatial / len;
        out.eigenvalues.resize(2);
        out.eigenvalues << x[0] + len, x[0] - len;
        for (double sign : {1.0, -1.0}) {
            Eigen::VectorXd c(n + 1);
            c(0) = 0.5;
            c.tail(n) = 0.5 * sign * dir;
            out.idempotents.emplace_back(alg, std::move(c));
        }
    }

    const double scale = norm(x);
    if (scale > 0.0) {
        for (std::size_t i = 0; i < out.idempotents.size(); ++i) {
            const Element& c = out.idempotents[i];
            const double res = norm(jordan_product(x, c) - out.eigenvalues(i) * c) / scale;
            if (res > kSpectralResidualTol) {
                throw NumericalError("spectral residual " + std::to_string(res) +
                                     " exceeds tolerance");
            }
        }
    }
    return out;
}

Eigen::VectorXd eigenvalues(const Element& x) {
    if (x.algebra().is_sym_real()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.to_matrix(), Eigen::EigenvaluesOnly);
        return es.eigenvalues().reverse();
    }
    const double len = x.coords().tail(x.coords().size() - 1).norm();
    Eigen::VectorXd ev(2);
    ev << x[0] + len, x[0] - len;
    return ev;
}

Element spectral_map(const Element& x, const std::function<double(double)>& fn) {
    const SpectralDecomposition sd = spectral_decompose(x);
    Element out = Element::zero(x.algebra());
    for (std::size_t i = 0; i < sd.idempotents.size(); ++i) {
        out += fn(sd.eigenvalues(static_cast<Eigen::Index>(i))) * sd.idempotents[i];
    }
    return out;
}

double determinant(const Element& x) {
    if (x.algebra().is_sym_real()) return x.to_matrix().partialPivLu().determinant();
    const double len2 = x.coords().tail(x.coords().size() - 1).squaredNorm();
    return x[0] * x[0] - len2;
}

Element inverse(const Element& x) {
    const Eigen::VectorXd ev = eigenvalues(x);
    const double largest = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.cwiseAbs().minCoeff() <= 1e-14 * largest) {
        throw SingularityError("element is not invertible (eigenvalue near zero)");
    }
    return spectral_map(x, [](double l) { return 1.0 / l; });
}

// --- regions -----------------------------------------------------------------

bool membership(const Element& x, Region region, double margin) {
    const Eigen::VectorXd ev = eigenvalues(x);
    if (!(ev.minCoeff() > margin)) return false;
    if (region == Region::D) return 1.0 - ev.maxCoeff() > margin;
    return true;
}

void require_cone(const Element& x, const char* what) {
    if (!membership(x, Region::Cone)) {
        throw DomainError(std::string(what) + ": argument is not in the cone V");
    }
}

void require_D(const Element& x, const char* what) {
    if (!membership(x, Region::D)) {
        throw DomainError(std::string(what) + ": argument is not in D = {x in V : e - x in V}");
    }
}

Element sqrt_element(const Element& x) {
    require_cone(x, "sqrt_element");
    return spectral_map(x, [](double l) { return std::sqrt(l); });
}

Element power(const Element& x, double p) {
    require_cone(x, "power");
    return spectral_map(x, [p](double l) { return std::pow(l, p); });
}

// --- triangular quantities ---------------------------------------------------

Eigen::MatrixXd cholesky_factor(const Element& x) {
    require_sym_real(x.algebra(), "cholesky_factor");
    Eigen::LLT<Eigen::MatrixXd> llt(x.to_matrix());
    if (llt.info() != Eigen::Success) {
        throw DomainError("cholesky_factor: argument is not positive definite");
    }
    Eigen::MatrixXd t = llt.matrixL();
    if (!(t.diagonal().minCoeff() > 0.0)) {
        throw DomainError("cholesky_factor: nonpositive pivot");
    }
    return t;
}

Eigen::VectorXd log_leading_minors(const Element& x) {
    if (!x.algebra().is_sym_real()) {
        throw UnsupportedError("principal minors require a SymReal algebra");
    }
    const Eigen::MatrixXd t = cholesky_factor(x);
    const int r = x.algebra().rank();
    Eigen::VectorXd out(r);
    double acc = 0.0;
    for (int k = 0; k < r; ++k) {
        acc += 2.0 * std::log(t(k, k));
        out(k) = acc;
    }
    return out;
}

double log_power_function(const Element& x, const Eigen::VectorXd& s) {
    if (!x.algebra().is_sym_real()) {
        throw UnsupportedError("generalized power function requires a SymReal algebra");
    }
    const int r = x.algebra().rank();
    if (s.size() != r) {
        throw DomainError("power vector length " + std::to_string(s.size()) +
                          " does not match rank " + std::to_string(r));
    }
    const Eigen::VectorXd lm = log_leading_minors(x);
    double acc = 0.0;
    for (int k = 0; k < r; ++k) {
        const double next = (k + 1 < r) ? s(k + 1) : 0.0;
        acc += (s(k) - next) * lm(k);
    }
    return acc;
}

double power_function(const Element& x, const Eigen::VectorXd& s) {
    return std::exp(log_power_function(x, s));
}

// --- K -----------------------------------------------------------------------

LinearOperator conjugation_operator(const AlgebraDescriptor& algebra, const Eigen::MatrixXd& o) {
    const int n = algebra.is_sym_real() ? algebra.rank() : algebra.parameter();
    if (o.rows() != n || o.cols() != n) {
        throw DomainError("conjugation matrix has wrong shape for " + algebra.name());
    }
    if ((o.transpose() * o - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("conjugation matrix is not orthogonal");
    }
    if (algebra.is_sym_real()) {
        return LinearOperator::from_map(algebra, [&](const Element& y) {
            return Element::from_matrix(algebra, o * y.to_matrix() * o.transpose());
        });
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m(0, 0) = 1.0;
    m.bottomRightCorner(n, n) = o;
    return LinearOperator(algebra, std::move(m));
}

double k_membership_defect(const LinearOperator& k) {
    const AlgebraDescriptor& alg = k.algebra();
    const Element e = Element::identity(alg);
    double defect = norm(k(e) - e);

    const Eigen::MatrixXd w = alg.inner_weights().asDiagonal();
    const Eigen::MatrixXd& m = k.matrix();
    defect = std::max(defect, (m.transpose() * w * m - w).cwiseAbs().maxCoeff());

    const int d = alg.vector_dim();
    std::vector<Element> basis;
    std::vector<Element> images;
    for (int i = 0; i < d; ++i) {
        basis.emplace_back(alg, Eigen::VectorXd::Unit(d, i));
        images.push_back(k(basis.back()));
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            const Element lhs = k(jordan_product(basis[i], basis[j]));
            const Element rhs = jordan_product(images[i], images[j]);
            defect = std::max(defect, norm(lhs - rhs));
        }
    }
    return defect;
}

double commutator_norm(const Element& a, const Element& b) {
    const Eigen::MatrixXd la = multiplication_operator(a).matrix();
    const Eigen::MatrixXd lb = multiplication_operator(b).matrix();
    return (la * lb - lb * la).norm();
}

} // namespace symcone
