#pragma once

// Multiplication algorithms w: V -> G with w(x)e = x, and their inverses
// g_w = w^{-1} (division algorithms).

#include "symcone/algebra.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symcone {

enum class MultKind { SqrtP, Cholesky, KTwist, AlphaInterp, PatchworkFixture };

class MultAlgorithm {
public:
    // w1(x) = P(x^{1/2}). Any algebra.
    static MultAlgorithm sqrt_p(const AlgebraDescriptor& algebra);
    // w2(x) y = t_x y t_x^T with x = t_x t_x^T lower-triangular. SymReal only.
    static MultAlgorithm cholesky(const AlgebraDescriptor& algebra);
    // w(x) = base(x) k for a fixed k in K; k is validated.
    static MultAlgorithm k_twist(const MultAlgorithm& base, const LinearOperator& k);
    // w(x) = P(x^alpha) t_{x^{1-2 alpha}}, alpha in [0, 1/2]. SymReal only.
    static MultAlgorithm alpha_interp(const AlgebraDescriptor& algebra, double alpha);
    // w1 where trace x <= r, w2 elsewhere. Breaks homogeneity; SymReal only.
    static MultAlgorithm patchwork(const AlgebraDescriptor& algebra);

    MultKind kind() const noexcept { return kind_; }
    const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
    double alpha() const noexcept { return alpha_; }
    // KTwist only.
    const MultAlgorithm* base() const noexcept { return base_.get(); }
    const std::optional<LinearOperator>& twist() const noexcept { return k_; }
    // w(e); an element of K.
    const LinearOperator& w_e() const noexcept { return w_e_; }

    std::string name() const;

    // True when log Delta_s is w-logarithmic for every s (the Cholesky
    // kernel, possibly twisted by a fixed k).
    bool triangular() const noexcept;

    // w(x) y
    Element apply(const Element& x, const Element& y) const;
    // g_w(x) y = w(x)^{-1} y
    Element divide(const Element& x, const Element& y) const;
    LinearOperator at(const Element& x) const;
    LinearOperator division_at(const Element& x) const;

private:
    MultAlgorithm(MultKind kind, AlgebraDescriptor algebra);

    MultKind kind_;
    AlgebraDescriptor algebra_;
    double alpha_ = 0.0;
    std::shared_ptr<const MultAlgorithm> base_;
    std::optional<LinearOperator> k_;
    std::optional<LinearOperator> k_inv_;
    LinearOperator w_e_;
};

Element w_apply(const MultAlgorithm& w, const Element& x, const Element& y);
Element gw_apply(const MultAlgorithm& w, const Element& x, const Element& y);

enum class SurjectivityStatus { Solved, Unknown };

struct SurjectivityResult {
    SurjectivityStatus status = SurjectivityStatus::Unknown;
    std::optional<Element> x;
    // |g_w(x)e - target| / |target|; infinite when no candidate was found.
    double residual = 0.0;
};

// Finds x in V with g_w(x) e = target. Closed forms for SqrtP (x = target^{-1}),
// Cholesky (reversed factorization of target^{-1}) and their twists; damped
// Newton from target^{-1} otherwise.
SurjectivityResult solve_division_surjectivity(const MultAlgorithm& w, const Element& target);

struct AxiomReport {
    bool axiom_ok = false;
    double axiom_max_defect = 0.0;
    double cond_A_max_defect = 0.0;
    // Defect at the smallest epsilon; cond_B_trend holds all three.
    double cond_B_defect = 0.0;
    std::vector<double> cond_B_trend;
    bool cond_B_ok = false;
    bool cond_C_ok = false;
    bool cond_C_unknown = false;
    double we_in_K_defect = 0.0;
    int samples_used = 0;

    bool passes(double tol = 1e-9) const noexcept;
};

inline constexpr double kAxiomTol = 1e-9;

// Never throws on a failed condition; failures show up as defects.
AxiomReport check_axioms(const MultAlgorithm& w, int sample_count, std::uint64_t rng_seed);

} // namespace symcone
