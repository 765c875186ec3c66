#pragma once

#include <vector>

#include "af/geometry.hpp"
#include "af/numeric.hpp"

namespace af {

// Grid estimate of frame constants over the subspace the grid can resolve:
// per-cell Fourier modes below the quadrature Nyquist limit.  Estimates are
// statements about that subspace and the truncated spectrum, labeled with
// both resolutions rather than asserted as the infinite-sum constants.
struct GridFrameEstimate {
    double k_hat = 0.0;
    double K_hat = 0.0;
    long grid_points_per_cell = 0;  // quadrature nodes per cell
    double lambda_truncation = 0.0;
    int rayleigh_iterations = 0;
    bool degenerate = false;  // k_hat below working precision: spectrum too small to span
    long resolved_modes = 0;  // dimension of the resolved subspace
    double volume = 0.0;
};

// Midpoint-quadrature Rayleigh bounds of the frame form
//   f -> sum over the truncated spectrum of |f_hat(lambda)|^2
// restricted to grid-resolved functions.  Deterministic for fixed inputs.
GridFrameEstimate estimate_bounds(const Domain& omega, const SpectrumSpec& lambda, int grid_n,
                                  const ExactScalar& radius);

struct ScaledPair {
    Domain omega;
    SpectrumSpec lambda;
};

// The companion pair (R^{-1} Omega, R^T Lambda).  Volume-normalized frame
// constants are preserved; raw constants pick up a factor 1/|det R|.
ScaledPair scale_pair(const RationalMatrix& R, const Domain& omega, const SpectrumSpec& lambda);

// Trigonometric polynomial sum_m c_m e^{i 2 pi m.x} used by the exact
// (quadrature-free) frame-sum path.
struct TrigPoly {
    std::vector<RationalVec> freqs;
    std::vector<ComplexValue> coeffs;
};

// f_hat(lambda) = sum_m c_m chi_hat(Omega, lambda - m), closed form.
ComplexValue exact_frame_coefficient(const Domain& omega, const TrigPoly& f,
                                     const ExactVec& lambda);

// Truncated frame sum of |f_hat|^2, closed form per term.
double exact_frame_sum(const Domain& omega, const TrigPoly& f, const SpectrumSpec& lambda,
                       const ExactScalar& radius);

// ||f||^2 over Omega via the transform of the frequency differences.
double trig_norm_sq(const Domain& omega, const TrigPoly& f);

}  // namespace af
