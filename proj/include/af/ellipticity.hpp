#pragma once

#include <utility>

#include "af/certificate.hpp"
#include "af/geometry.hpp"
#include "af/numeric.hpp"

namespace af {

// Spectral data of the translate/frequency pairing matrix M(l,b) = e^{i2pi b.l}
// (rows indexed by L, columns by B) and A = M^* M.
struct EllipticityReport {
    std::vector<RationalVec> B;
    std::vector<RationalVec> L;
    Eigen::MatrixXcd M;  // |L| x |B|
    Eigen::MatrixXcd A;  // |B| x |B|, Hermitian
    double p = 0.0;      // min eigenvalue of A
    double P = 0.0;      // max eigenvalue of A
    bool hadamard = false;
};

EllipticityReport build_report(const std::vector<RationalVec>& B,
                               const std::vector<RationalVec>& L);

// New frame constants (k*p, K*P) for the translate-extended pair.  The
// hypothesis that every b lies in the annihilator of the spectrum is verified
// when a rational spectrum is supplied, and recorded as an assumption when not.
FrameCertificate propagate_constants(double k, double K, const EllipticityReport& report,
                                     const SpectrumSpec* spectrum = nullptr);

// Rank-obstruction form: entries over probes xi, xi' in B*:
//   alpha' * conj(phi_B(xi)) phi_B(xi') + conj(phi_B(xi-lambda)) phi_B(xi'-lambda).
// Sum of two dyads, so the rank never exceeds 2.
struct QLambda {
    HermitianMatrix Q;
    int rank = 0;
    Eigen::VectorXd eigenvalues;
};

QLambda q_lambda(const std::vector<RationalVec>& B, double alpha_prime, const ExactVec& lambda,
                 const std::vector<ExactVec>& probes);

}  // namespace af
