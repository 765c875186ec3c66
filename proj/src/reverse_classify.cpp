#include "af/reverse_classify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "af/errors.hpp"
#include "af/numeric.hpp"
#include "af/parallel.hpp"
#include "af/transforms.hpp"

namespace af {

namespace {

std::string vec_text(const ExactVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i].to_string();
    }
    os << ")";
    return os.str();
}

bool is_origin(const ExactVec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// Exact when the data permits, threshold fallback otherwise.
bool transform_vanishes(const Domain& omega, const ExactVec& lambda, double volume) {
    try {
        return chi_hat_is_zero(omega, lambda);
    } catch (const ExactnessError&) {
        return std::abs(chi_hat(omega, lambda).value) <= 1e-9 * volume;
    }
}

ComplexValue exp_entry(const ExactScalar& phase) {
    double fr = phase.frac().to_double();
    return std::polar(1.0, 2.0 * std::numbers::pi * fr);
}

double unitary_defect_of(const std::vector<RationalVec>& B, const std::vector<ExactVec>& L) {
    auto n = static_cast<Eigen::Index>(B.size());
    Eigen::MatrixXcd U(n, n);
    double scale = 1.0 / std::sqrt(static_cast<double>(B.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
        ExactVec b = to_exact(B[static_cast<size_t>(r)]);
        for (Eigen::Index c = 0; c < n; ++c)
            U(r, c) = scale * exp_entry(dot(b, L[static_cast<size_t>(c)]));
    }
    return (U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace

ReverseResult reverse_spectrum(const Domain& omega, const std::vector<RationalVec>& B,
                               const SpectrumSpec& lambda, const FrameCertificate& certificate,
                               const ExactScalar& truncation_radius) {
    if (B.empty())
        throw ArgumentError("reverse.empty-translates", "translate set must be nonempty");
    std::vector<ExactVec> bex;
    bex.reserve(B.size());
    for (const auto& b : B) {
        if (static_cast<int>(b.size()) != omega.dim())
            throw ArgumentError("geometry.dim-mismatch", "translate dimension differs");
        bex.push_back(to_exact(b));
    }
    if (lambda.dim() != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "spectrum dimension differs");
    if (check_no_overlap(omega, bex) == OverlapClass::Overlap)
        throw HypothesisError("reverse.domain-overlap",
                              "translated domain copies overlap on positive volume");
    if (lambda.enumerate(ExactScalar(0)).empty())
        throw HypothesisError("reverse.zero-missing", "spectrum must contain the origin");

    // The union domain Omega + B shares the box of Omega.
    std::vector<ExactVec> union_translates;
    for (const auto& b : bex)
        for (const auto& t : omega.translates()) {
            ExactVec s(t.size());
            for (size_t k = 0; k < t.size(); ++k) s[k] = t[k] + b[k];
            union_translates.push_back(s);
        }
    Domain union_dom(omega.corner(), omega.edges(), union_translates);
    double union_vol = union_dom.volume().to_double();
    double omega_vol = omega.volume().to_double();

    std::vector<ExactVec> pts = lambda.enumerate(truncation_radius);
    for (const auto& pt : pts) {
        if (is_origin(pt)) continue;
        if (!transform_vanishes(union_dom, pt, union_vol))
            throw HypothesisError("reverse.not-orthogonal",
                                  "union transform does not vanish on the spectrum at " +
                                      vec_text(pt));
    }

    ReverseResult out;
    std::vector<ExactVec> members;
    for (const auto& pt : pts) {
        if (is_origin(pt)) continue;
        if (transform_vanishes(omega, pt, omega_vol)) {
            members.push_back(pt);
            out.zero_witnesses.push_back(pt);
        }
    }
    members.push_back(ExactVec(static_cast<size_t>(omega.dim()), ExactScalar(0)));
    std::sort(members.begin(), members.end(), lex_less);
    out.lambda_omega = SpectrumSpec(FiniteSet{members});

    out.certificate.k = certificate.k / static_cast<double>(B.size());
    out.certificate.K = certificate.K;
    out.certificate.provenance = certificate.provenance;
    out.certificate.tolerance = certificate.tolerance;
    out.certificate.method = "reverse-spectrum";
    out.certificate.assumptions = certificate.assumptions;
    out.certificate.assumptions.push_back("orthogonality verified over truncation radius " +
                                          truncation_radius.to_string());
    if (certificate.k_exact)
        out.certificate.k_exact = *certificate.k_exact / Rational(Integer(B.size()));
    out.certificate.K_exact = certificate.K_exact;
    out.certificate.flagged_not_total = members.size() == 1;
    return out;
}

LatticeClassification verify_lattice_classification(const Domain& domain,
                                                    const RationalMatrix& basis,
                                                    const std::vector<RationalVec>& B,
                                                    const SpectrumSpec& lambda,
                                                    const ExactScalar& truncation_radius) {
    int d = domain.dim();
    if (basis.rows() != d || basis.cols() != d)
        throw ArgumentError("geometry.dim-mismatch", "lattice basis must be square of domain dimension");
    if (B.empty())
        throw ArgumentError("reverse.empty-translates", "translate set must be nonempty");
    if (lambda.dim() != d)
        throw ArgumentError("geometry.dim-mismatch", "spectrum dimension differs");

    Rational det = basis.determinant();
    if (det == 0)
        throw HypothesisError("reverse.singular-basis", "lattice basis is singular");
    Rational adet = det < 0 ? Rational(-det) : det;
    if (!(domain.volume() == ExactScalar(adet)))
        throw HypothesisError("reverse.volume-mismatch",
                              "domain volume does not match the basis determinant");
    if (lambda.enumerate(ExactScalar(0)).empty())
        throw HypothesisError("reverse.zero-missing", "spectrum must contain the origin");

    LatticeClassification out;
    RationalMatrix gt = basis.transpose();
    RationalMatrix gti = gt.inverse();
    double vol = domain.volume().to_double();
    std::vector<ExactVec> pts = lambda.enumerate(truncation_radius);

    // Zeros of the domain transform inside the spectrum must lie in the dual
    // lattice: gt maps dual points to integer vectors.
    for (const auto& pt : pts) {
        if (is_origin(pt)) continue;
        if (!transform_vanishes(domain, pt, vol)) continue;
        ExactVec y = gt.apply(pt);
        bool in_dual = true;
        for (const auto& c : y)
            if (!c.is_integer()) {
                in_dual = false;
                break;
            }
        if (!in_dual) {
            out.counterexample = pt;
            out.report = "transform zero outside the dual lattice at " + vec_text(pt);
            return out;
        }
    }

    // Coset keys: fractional parts in dual coordinates.
    std::vector<RationalVec> keys;
    for (const auto& pt : pts) {
        ExactVec y = gt.apply(pt);
        RationalVec key(y.size());
        for (size_t i = 0; i < y.size(); ++i) {
            ExactScalar f = y[i].frac();
            if (!f.is_rational()) {
                out.report = "irrational coset coordinate at " + vec_text(pt);
                return out;
            }
            key[i] = f.as_rational();
        }
        keys.push_back(std::move(key));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<ExactVec> reps;
    reps.reserve(keys.size());
    for (const auto& key : keys) reps.push_back(gti.apply(to_exact(key)));

    // The truncated spectrum must coincide with the truncated coset model.
    LatticeCosets model;
    for (int j = 0; j < d; ++j) {
        ExactVec col(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) col[static_cast<size_t>(i)] = ExactScalar(gti(i, j));
        model.generators.push_back(col);
    }
    model.offsets = reps;
    std::vector<ExactVec> model_pts = SpectrumSpec(model).enumerate(truncation_radius);
    size_t n = std::min(model_pts.size(), pts.size());
    for (size_t i = 0; i < n; ++i) {
        if (!(model_pts[i] == pts[i])) {
            out.report = "spectrum differs from the extracted cosets near " +
                         vec_text(lex_less(model_pts[i], pts[i]) ? model_pts[i] : pts[i]);
            return out;
        }
    }
    if (model_pts.size() != pts.size()) {
        const ExactVec& extra =
            model_pts.size() > pts.size() ? model_pts[n] : pts[n];
        out.report = "spectrum differs from the extracted cosets near " + vec_text(extra);
        return out;
    }

    if (reps.size() != B.size()) {
        std::ostringstream os;
        os << "found " << reps.size() << " cosets for " << B.size() << " translates";
        out.report = os.str();
        return out;
    }

    out.unitary_defect = unitary_defect_of(B, reps);
    if (out.unitary_defect > 1e-9) {
        out.report = "normalized exponential matrix is not unitary";
        return out;
    }
    out.classified = true;
    out.L = std::move(reps);
    return out;
}

ClassifyResult classify_1d(const std::vector<RationalVec>& B, const SpectrumSpec& lambda,
                           const ExactScalar& truncation_radius) {
    if (B.empty())
        throw ArgumentError("reverse.empty-translates", "translate set must be nonempty");
    for (const auto& b : B)
        if (b.size() != 1)
            throw ArgumentError("geometry.dim-mismatch", "classification is one-dimensional");
    if (lambda.dim() != 1)
        throw ArgumentError("geometry.dim-mismatch", "classification is one-dimensional");
    for (size_t i = 0; i < B.size(); ++i)
        for (size_t j = i + 1; j < B.size(); ++j)
            if (B[i][0] == B[j][0])
                throw ArgumentError("reverse.duplicate-translate", "translate set has duplicates");

    ClassifyResult out;
    std::vector<ExactVec> pts = lambda.enumerate(truncation_radius);
    if (pts.empty())
        throw ArgumentError("reverse.empty-truncation", "spectrum truncation produced no points");

    // Representatives of Lambda mod 1.
    std::vector<ExactScalar> reps;
    for (const auto& pt : pts) reps.push_back(pt[0].frac());
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    out.L = reps;

    // Conclusion: Lambda = L + Z, compared exactly over the truncation.
    LatticeCosets model;
    model.generators.push_back(ExactVec{ExactScalar(1)});
    for (const auto& r : reps) model.offsets.push_back(ExactVec{r});
    std::vector<ExactVec> model_pts = SpectrumSpec(model).enumerate(truncation_radius);
    bool structure_ok = model_pts.size() == pts.size();
    std::optional<ExactVec> structure_witness;
    for (size_t i = 0; structure_ok && i < pts.size(); ++i)
        if (!(model_pts[i] == pts[i])) structure_ok = false;
    if (!structure_ok) {
        size_t n = std::min(model_pts.size(), pts.size());
        for (size_t i = 0; i < n; ++i)
            if (!(model_pts[i] == pts[i])) {
                structure_witness =
                    lex_less(model_pts[i], pts[i]) ? model_pts[i] : pts[i];
                break;
            }
        if (!structure_witness && model_pts.size() != pts.size())
            structure_witness = model_pts.size() > pts.size() ? model_pts[n] : pts[n];
        out.violations.push_back({"structure",
                                  "spectrum is not a full set of integer cosets over the truncation",
                                  structure_witness});
    }

    if (reps.size() != B.size()) {
        std::ostringstream os;
        os << "found " << reps.size() << " cosets for " << B.size() << " translates";
        out.violations.push_back({"cardinality", os.str(), std::nullopt});
    }

    for (size_t i = 0; i < B.size(); ++i)
        for (size_t j = i + 1; j < B.size(); ++j) {
            Rational diff = B[i][0] - B[j][0];
            if (boost::multiprecision::denominator(diff) != 1) {
                std::ostringstream os;
                os << "translates " << rational_to_string(B[i][0]) << " and "
                   << rational_to_string(B[j][0]) << " differ by a non-integer";
                out.violations.push_back(
                    {"translate-difference-not-integer", os.str(),
                     ExactVec{ExactScalar(diff)}});
            }
        }

    // Translates in a common integer coset make the matrix independent of the
    // integer part, so the representatives alone decide unitarity.
    if (reps.size() == B.size()) {
        std::vector<ExactVec> L;
        for (const auto& r : reps) L.push_back(ExactVec{r});
        double defect = unitary_defect_of(B, L);
        if (defect > 1e-9) {
            std::ostringstream os;
            os << "normalized exponential matrix deviates from unitary by " << defect;
            out.violations.push_back({"not-unitary", os.str(), std::nullopt});
        }
    }

    out.valid = out.violations.empty();
    return out;
}

std::vector<std::vector<Rational>> search_L(const std::vector<Rational>& B,
                                            int denominator_bound) {
    if (B.empty())
        throw ArgumentError("reverse.empty-translates", "translate set must be nonempty");
    if (denominator_bound < 1)
        throw ArgumentError("reverse.bad-denominator-bound",
                            "denominator bound must be at least 1");
    for (const auto& b : B)
        if (boost::multiprecision::denominator(b) != 1)
            throw ArgumentError("reverse.translate-not-integer",
                                "search expects integer translates");
    for (size_t i = 0; i < B.size(); ++i)
        for (size_t j = i + 1; j < B.size(); ++j)
            if (B[i] == B[j])
                throw ArgumentError("reverse.duplicate-translate", "translate set has duplicates");

    std::vector<RationalVec> bvecs;
    for (const auto& b : B) bvecs.push_back(RationalVec{b});

    // Candidate representatives: all fractions with denominator <= bound.
    std::vector<Rational> cand;
    for (int q = 1; q <= denominator_bound; ++q)
        for (int p = 0; p < q; ++p) cand.push_back(Rational(p, q));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    size_t m = cand.size();
    size_t need = B.size();
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j) {
            bool zero = phi_B_is_zero(bvecs, ExactVec{ExactScalar(Rational(cand[j] - cand[i]))});
            adj[i][j] = adj[j][i] = zero ? 1 : 0;
        }

    // Cliques of the required size containing 0 (candidate index 0), explored
    // in parallel over the second member and merged in order.
    std::vector<std::vector<std::vector<size_t>>> found(m);
    auto extend = [&](std::vector<size_t>& cur, size_t start, auto&& self) -> void {
        if (cur.size() == need) {
            found[cur.size() > 1 ? cur[1] : 0].push_back(cur);
            return;
        }
        for (size_t t = start; t + (need - cur.size()) <= m; ++t) {
            bool ok = true;
            for (size_t u : cur)
                if (!adj[u][t]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            cur.push_back(t);
            self(cur, t + 1, self);
            cur.pop_back();
        }
    };
    if (need == 1) {
        found[0].push_back({0});
    } else {
        parallel_for(m, default_thread_count(), [&](size_t second) {
            if (second == 0 || !adj[0][second]) return;
            std::vector<size_t> cur{0, second};
            extend(cur, second + 1, extend);
        });
    }

    std::vector<std::vector<Rational>> out;
    for (size_t s = 0; s < m; ++s)
        for (const auto& clique : found[s]) {
            std::vector<ExactVec> L;
            std::vector<Rational> reps;
            for (size_t idx : clique) {
                L.push_back(ExactVec{ExactScalar(cand[idx])});
                reps.push_back(cand[idx]);
            }
            if (unitary_defect_of(bvecs, L) <= 1e-9) out.push_back(std::move(reps));
        }
    return out;
}

}  // namespace af
