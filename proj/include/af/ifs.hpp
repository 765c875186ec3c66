#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "af/geometry.hpp"

namespace af {

// One run of the joint iteration
//   Omega_{n+1} = union_b R^{-1}(Omega_n + b),   Lambda_{n+1} = union_l R^T(Lambda_n + l),
// keeping the full history so sums at any depth <= j stay available.
struct IterationState {
    AffineSystem system;
    int j = 0;
    std::vector<Domain> omegas;                  // levels 0..j
    std::vector<std::vector<ExactVec>> lambdas;  // levels 0..j, sorted
    std::vector<OverlapClass> overlaps;          // classification of Omega_i, levels 1..j
};

// Level-0 state; an empty seed spectrum means { origin }.
IterationState make_initial_state(AffineSystem system, Domain omega0,
                                  std::vector<ExactVec> lambda0 = {});

// Advance one level.  The domain image may touch itself (null overlap) but
// not overlap on positive volume; the spectrum-side images must be pairwise
// distinct, and a collision reports the pair that produced it.
IterationState iterate(const IterationState& state);

struct SpectralSumEntry {
    int j = 0;
    double s = 0.0;                 // (|B|/|L|)^j sum over Lambda_j of |(e_t dmu_j)^(lambda)|^2
    double truncation_error = 0.0;  // accumulated certified bound on |s - exact|
};

struct SpectralSumSeries {
    std::vector<SpectralSumEntry> entries;  // ordered by j
};

SpectralSumEntry spectral_sum(const IterationState& state, const ExactVec& t, int j);
SpectralSumSeries spectral_sum_series(const IterationState& state, const ExactVec& t, int j_max);

struct LowerBoundEstimate {
    double epsilon_hat = 0.0;
    SpectralSumSeries series;
    double f_norm_sq = 1.0;  // integral of |e_t|^2 dmu; exactly 1 (unimodular, mu probability)
    bool mc_skipped = true;  // the unimodular shortcut makes sampling unnecessary
};

// epsilon_hat = min_{j <= j_max} S_j / ||e_t||^2_mu.  The denominator is
// exactly 1 for exponentials, so mc_samples is accepted for interface
// stability but never consumed.
LowerBoundEstimate lower_bound_estimate(const IterationState& state, const ExactVec& t,
                                        int j_max, long mc_samples = 0);

// n draws of the stationary measure of x -> R^{-1}(x + b), b uniform over B:
// row i is the i-th sample.  Counter-based per-stream generators make the
// output byte-identical for a fixed seed at any thread count.
Eigen::MatrixXd chaos_game_sample(const AffineSystem& system, long n, std::uint64_t seed);

}  // namespace af
