#pragma once

#include <optional>
#include <string>
#include <vector>

#include "af/certificate.hpp"
#include "af/geometry.hpp"

namespace af {

// Reverse construction: from a certified pair on the union Omega + B, pass to
// Omega itself with the sub-spectrum cut out by the zeros of chi_hat_Omega.
struct ReverseResult {
    SpectrumSpec lambda_omega;              // finite truncation, 0 always a member
    FrameCertificate certificate;           // constants (k/|B|, K)
    std::vector<ExactVec> zero_witnesses;   // nonzero members, chi_hat vanishing
};

// Hypotheses: B + Omega non-overlapping, 0 in Lambda, and chi_hat of the union
// vanishing on Lambda \ {0} over the truncation (within 1e-9 * volume, exact
// where the data is rational).  Zero selection on Omega uses the exact test
// when possible and the same relative threshold otherwise.
ReverseResult reverse_spectrum(const Domain& omega, const std::vector<RationalVec>& B,
                               const SpectrumSpec& lambda, const FrameCertificate& certificate,
                               const ExactScalar& truncation_radius);

struct LatticeClassification {
    bool classified = false;
    std::vector<ExactVec> L;                 // coset representatives in the dual cell
    std::optional<ExactVec> counterexample;  // zero-set inclusion failure, when present
    std::string report;                      // reason when not classified
    double unitary_defect = 0.0;             // max-norm distance of U*U from the identity
};

// Checks the lattice classification against a concrete candidate spectrum:
// vol(D) must match |det basis| exactly, zeros of chi_hat_D inside Lambda must
// land in the dual lattice, the truncated spectrum must equal L + dual for the
// extracted representatives L, and (|B|^{-1/2} e^{i 2 pi l.b}) must be unitary.
LatticeClassification verify_lattice_classification(const Domain& domain,
                                                    const RationalMatrix& basis,
                                                    const std::vector<RationalVec>& B,
                                                    const SpectrumSpec& lambda,
                                                    const ExactScalar& truncation_radius);

struct ClassificationViolation {
    std::string code;    // stable slug, e.g. "translate-difference-not-integer"
    std::string detail;
    std::optional<ExactVec> witness;
};

struct ClassifyResult {
    bool valid = false;
    std::vector<ExactScalar> L;  // representatives in [0, 1)
    std::vector<ClassificationViolation> violations;  // every failed conclusion
};

// One-dimensional classification over the unit interval: Lambda must be
// L + Z with |L| = |B|, translate differences must be integers, and the
// normalized exponential matrix must be unitary.  All failures are reported,
// not just the first.
ClassifyResult classify_1d(const std::vector<RationalVec>& B, const SpectrumSpec& lambda,
                           const ExactScalar& truncation_radius);

// All candidate spectra L for the interval union given by integer B: subsets
// of the fractions with denominator at most q, containing 0, of size |B|,
// whose pairwise differences kill phi_B, with the normalized matrix unitary.
// Deduplicated via representatives in [0, 1).
std::vector<std::vector<Rational>> search_L(const std::vector<Rational>& B,
                                            int denominator_bound);

}  // namespace af
