#pragma once

#include <vector>

#include "af/geometry.hpp"
#include "af/numeric.hpp"

namespace af {

// A transform evaluation together with a certified absolute error bound.
// Closed-form evaluations carry bound 0 (floating rounding only); truncated
// infinite products carry their tail estimate.
struct TransformValue {
    ComplexValue value{0.0, 0.0};
    double abs_error_bound = 0.0;
};

// sum over r of e^{i 2 pi r}; each phase is reduced mod 1 exactly first.
ComplexValue phase_sum(const std::vector<ExactScalar>& phases);

// Exact zero test for the phase sum.  Rational phases reduce to a vanishing
// sum of roots of unity (decided by cyclotomic reduction); one- and two-term
// sums are decided for quadratic-irrational phases as well; larger mixed sums
// raise ExactnessError.
bool phase_sum_is_zero(const std::vector<ExactScalar>& phases);

// phi_B(xi) = sum over b in B of e^{i 2 pi b . xi}.
ComplexValue phi_B(const std::vector<RationalVec>& B, const ExactVec& xi);
ComplexValue phi_B(const std::vector<RationalVec>& B, const Eigen::VectorXd& xi);
bool phi_B_is_zero(const std::vector<RationalVec>& B, const ExactVec& xi);

// chi_hat(Omega, lambda) = integral over Omega of e^{-i 2 pi lambda . x} dx,
// evaluated in closed form (product of interval transforms times translate
// phase sum).  chi_hat(Omega, 0) = vol(Omega).
TransformValue chi_hat(const Domain& omega, const ExactVec& lambda);
bool chi_hat_is_zero(const Domain& omega, const ExactVec& lambda);

// Preconditions shared by the measure iteration: nonempty translate set and
// an expansive matrix.  Throws ArgumentError otherwise.
void require_iterable(const AffineSystem& sys);

// Transform of the normalized depth-n measure:
//   mu_hat_0(lambda) = chi_hat(Omega0, lambda) / vol(Omega0),
//   mu_hat_{k+1}(lambda) = (1/|B|) conj(phi_B(S^{-1} lambda)) mu_hat_k(S^{-1} lambda),
// with S = R^T.  Exact pullback points, float rounding only.
TransformValue mu_hat_n(const AffineSystem& sys, const Domain& initial, int n,
                        const ExactVec& lambda);

// Limit transform as the infinite product over k >= 1 of
// (1/|B|) conj(phi_B(S^{-k} lambda)), truncated adaptively so the geometric
// tail bound is below tail_target (K capped at 200, never silently exceeded).
TransformValue mu_hat_limit(const AffineSystem& sys, const ExactVec& lambda,
                            double tail_target = 1e-9);

// Transform of f dmu_n for f = e_t: equals mu_hat_n(lambda - t).
TransformValue f_dmu_hat(const AffineSystem& sys, const Domain& initial, int n,
                         const ExactVec& t, const ExactVec& lambda);

}  // namespace af
