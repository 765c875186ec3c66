#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "af/certificate.hpp"
#include "af/geometry.hpp"

namespace af {

// The union construction: Omega1 = Omega u (Omega + a) against the spectrum
// Lambda1 = (Lambda + beta) u Lambda2, where (Omega2, Lambda2) is a second
// pair with Omega contained in Omega2 and a annihilating Lambda2.
struct TwoTranslateProblem {
    Domain omega;
    SpectrumSpec lambda;
    Domain omega2;
    SpectrumSpec lambda2;
    ExactVec a;
    ExactVec beta;
    // Frame constants of (omega, lambda) / (omega2, lambda2).  Absent means
    // "strict spectral pair" (tight Parseval constants are implied).
    std::optional<FrameCertificate> cert;
    std::optional<FrameCertificate> cert2;
};

struct SpectrumSamplePoint {
    ExactVec lambda;
    double theta;  // 2 pi (beta + lambda) . a
    double r_minus;
    double r_plus;
};

struct SpectralResolution {
    std::vector<SpectrumSamplePoint> points;
    std::string mode;  // "equality" (exact eigenvalues) | "inequality" (lower-bound form)
    double alpha = 0.0;
};

struct GspDecision {
    bool is_gsp = false;
    bool condition_i = false;  // pointwise: a.(lambda+beta) is never an integer
    std::optional<ExactVec> condition_i_witness;
    bool condition_i_literal = false;  // a does not annihilate all of Lambda+beta
    bool condition_ii = false;         // a.(lambda) rational for every lambda
    std::optional<ExactVec> condition_ii_witness;
    double alpha = 0.0;
    std::vector<SpectrumSamplePoint> spectrum_sample;
    double inf_r_minus = 0.0;
    std::string mode;   // equality/inequality, as in SpectralResolution
    bool exact_mode = false;            // rational a: residue analysis is exact
    std::vector<Rational> residues;     // distinct values of a.(lambda+beta) mod 1
    double residue_min_r_minus = 0.0;   // exact-mode minimum over the residue set
    bool lambda_sets_disjoint = true;   // (Lambda+beta) vs Lambda2 over the truncation
    bool constants_halved = false;      // set when the union double-counts
};

// alpha = 2 vol(Omega2) / vol(Omega), exact before conversion; checks the box
// containment Omega inside Omega2.
double alpha_of(const Domain& omega, const Domain& omega2);

// r_pm of the two-translate frame operator at theta = 2 pi (beta+lambda).a:
//   r_pm = (2+alpha) +- sqrt((2+alpha)^2 - 4 alpha (1 - cos theta)).
std::pair<double, double> r_pm(const ExactVec& lambda, const ExactVec& beta, const ExactVec& a,
                               double alpha);
std::pair<double, double> r_pm_theta(double theta, double alpha);

SpectralResolution spectral_resolution(const TwoTranslateProblem& problem,
                                       const ExactScalar& truncation_radius);

GspDecision decide_gsp(const TwoTranslateProblem& problem, const ExactScalar& truncation_radius);

}  // namespace af
