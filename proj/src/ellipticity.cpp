#include "af/ellipticity.hpp"

#include "af/transforms.hpp"

namespace af {

EllipticityReport build_report(const std::vector<RationalVec>& B,
                               const std::vector<RationalVec>& L) {
    if (B.empty() || L.empty())
        throw ArgumentError("ellipticity.empty-set", "translate and frequency sets must be nonempty");

    EllipticityReport rep;
    rep.B = B;
    rep.L = L;
    auto nb = static_cast<Eigen::Index>(B.size());
    auto nl = static_cast<Eigen::Index>(L.size());
    rep.M.resize(nl, nb);
    for (Eigen::Index r = 0; r < nl; ++r)
        for (Eigen::Index c = 0; c < nb; ++c) {
            ExactScalar phase = dot(to_exact(B[static_cast<size_t>(c)]),
                                    to_exact(L[static_cast<size_t>(r)]));
            rep.M(r, c) = unit_exponential(phase.frac().to_double());
        }
    rep.A = rep.M.adjoint() * rep.M;
    Eigen::VectorXd eigs = hermitian_eigenvalues(rep.A);
    rep.p = std::max(0.0, eigs(0));
    rep.P = eigs(eigs.size() - 1);

    rep.hadamard = B.size() == L.size();
    if (rep.hadamard) {
        Eigen::MatrixXcd target = static_cast<double>(B.size()) *
                                  Eigen::MatrixXcd::Identity(nb, nb);
        rep.hadamard = (rep.A - target).cwiseAbs().maxCoeff() <= 1e-9;
    }
    return rep;
}

FrameCertificate propagate_constants(double k, double K, const EllipticityReport& report,
                                     const SpectrumSpec* spectrum) {
    if (!(0 < k && k <= K))
        throw ArgumentError("ellipticity.bad-constants", "need 0 < k <= K");
    double scale = static_cast<double>(report.B.size() * report.L.size());
    if (report.p <= 1e-12 * std::max(1.0, scale))
        throw HypothesisError("ellipticity.not-elliptic",
                              "pairing matrix has a null column direction (p = 0): no lower "
                              "frame bound is claimable for the extended pair");

    FrameCertificate cert;
    cert.k = k * report.p;
    cert.K = K * report.P;
    cert.provenance = Provenance::ExactTheorem;
    cert.tolerance = 1e-9;
    cert.method = "translate-extension";
    if (spectrum != nullptr && spectrum->all_rational()) {
        for (const auto& b : report.B) {
            auto res = annihilator_contains(to_exact(b), *spectrum);
            if (!res.contains)
                throw HypothesisError(
                    "ellipticity.translate-not-annihilating",
                    "a domain translate does not annihilate the base spectrum (b.lambda "
                    "must be an integer for every spectrum point)");
        }
    } else {
        cert.assumptions.push_back(
            "every translate b pairs integrally with the base spectrum");
    }
    return cert;
}

QLambda q_lambda(const std::vector<RationalVec>& B, double alpha_prime, const ExactVec& lambda,
                 const std::vector<ExactVec>& probes) {
    if (probes.empty())
        throw ArgumentError("ellipticity.empty-probes", "probe set must be nonempty");
    if (probes.size() != B.size())
        throw ArgumentError("ellipticity.probe-count",
                            "probe set must have the same size as the translate set");
    auto n = static_cast<Eigen::Index>(probes.size());
    Eigen::VectorXcd u(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const ExactVec& xi = probes[static_cast<size_t>(i)];
        if (xi.size() != lambda.size())
            throw ArgumentError("geometry.dim-mismatch", "probe dimension mismatch");
        ExactVec shifted(xi.size());
        for (size_t c = 0; c < xi.size(); ++c) shifted[c] = xi[c] - lambda[c];
        u(i) = phi_B(B, xi);
        v(i) = phi_B(B, shifted);
    }
    QLambda out;
    out.Q = alpha_prime * (u.conjugate() * u.transpose()) + v.conjugate() * v.transpose();
    out.eigenvalues = hermitian_eigenvalues(out.Q);
    double trace = out.Q.real().trace();
    double tol = 1e-9 * std::max(trace, 0.0);
    out.rank = 0;
    for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i)
        if (out.eigenvalues(i) > tol) ++out.rank;
    return out;
}

}  // namespace af
