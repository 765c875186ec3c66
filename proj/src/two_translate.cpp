#include "af/two_translate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "af/errors.hpp"
#include "af/parallel.hpp"

namespace af {

namespace {

ExactVec vec_add(const ExactVec& a, const ExactVec& b) {
    ExactVec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ExactVec zero_vec(int d) { return ExactVec(static_cast<size_t>(d), ExactScalar(0)); }

void require_dims(const TwoTranslateProblem& p) {
    int d = p.omega.dim();
    if (p.omega2.dim() != d || p.lambda.dim() != d || p.lambda2.dim() != d ||
        static_cast<int>(p.a.size()) != d || static_cast<int>(p.beta.size()) != d)
        throw ArgumentError("geometry.dim-mismatch",
                            "two-translate data must share one ambient dimension");
}

// Every cell of `inner` must sit inside a single cell of `outer` (exact
// per-axis interval comparison).  Sufficient for the box data handled here.
bool cell_contained(const Domain& inner, const Domain& outer) {
    for (const auto& t : inner.translates()) {
        bool covered = false;
        for (const auto& s : outer.translates()) {
            bool fits = true;
            for (size_t i = 0; i < t.size(); ++i) {
                ExactScalar lo = t[i] + inner.corner()[i];
                ExactScalar hi = lo + inner.edges()[i];
                ExactScalar lo2 = s[i] + outer.corner()[i];
                ExactScalar hi2 = lo2 + outer.edges()[i];
                if (lo < lo2 || hi > hi2) {
                    fits = false;
                    break;
                }
            }
            if (fits) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

// a must make every element of the second spectrum integral (a in the
// annihilator).  Lattices are decided from generators and offsets; finite
// sets pointwise; generated sets over the truncation.
void require_annihilates(const ExactVec& a, const SpectrumSpec& spectrum,
                         const ExactScalar& radius) {
    std::vector<ExactVec> test;
    if (const LatticeCosets* lat = spectrum.lattice()) {
        test = lat->generators;
        for (const auto& o : lat->offsets) test.push_back(o);
    } else if (const FiniteSet* fin = spectrum.finite()) {
        test = fin->points;
    } else {
        test = spectrum.enumerate(radius);
    }
    for (const auto& w : test) {
        if (!dot(a, w).is_integer())
            throw HypothesisError("two-translate.not-annihilating",
                                  "translate vector does not annihilate the second spectrum");
    }
}

// Mode selection: provided certificates with k < K demote the resolution to
// the inequality form, and alpha is then taken from the constants
// (2 k2 / K1) instead of the volume ratio.
std::pair<std::string, double> resolve_mode_alpha(const TwoTranslateProblem& p) {
    double alpha_eq = alpha_of(p.omega, p.omega2);
    bool tight1 = !p.cert || p.cert->k == p.cert->K;
    bool tight2 = !p.cert2 || p.cert2->k == p.cert2->K;
    if (tight1 && tight2) return {"equality", alpha_eq};
    double k2 = p.cert2 ? p.cert2->k : p.omega2.volume().to_double();
    double K1 = p.cert ? p.cert->K : p.omega.volume().to_double();
    if (!(k2 > 0.0) || !(K1 > 0.0))
        throw ArgumentError("two-translate.bad-constants",
                            "frame constants must be positive to derive alpha");
    return {"inequality", 2.0 * k2 / K1};
}

struct SamplePass {
    std::vector<SpectrumSamplePoint> points;
    std::vector<char> integral;  // a.(lambda+beta) integer, per point
    double inf_r_minus = 0.0;
};

SamplePass run_sample_pass(const std::vector<ExactVec>& sample, const ExactVec& a,
                           const ExactVec& beta, double alpha) {
    SamplePass out;
    out.points.resize(sample.size());
    out.integral.assign(sample.size(), 0);
    parallel_for(sample.size(), default_thread_count(), [&](size_t i) {
        const ExactVec& lam = sample[i];
        ExactVec shifted = vec_add(lam, beta);
        double fr;
        bool is_int;
        try {
            ExactScalar v = dot(a, shifted);
            is_int = v.is_integer();
            fr = is_int ? 0.0 : v.frac().to_double();
        } catch (const ExactnessError&) {
            // Mixed radicands: reduce in floating point with witness-grade
            // tolerance.
            double v = 0.0;
            for (size_t j = 0; j < a.size(); ++j) v += a[j].to_double() * shifted[j].to_double();
            double r = v - std::round(v);
            is_int = std::abs(r) <= 1e-9;
            fr = is_int ? 0.0 : (r < 0 ? r + 1.0 : r);
        }
        double theta = 2.0 * std::numbers::pi * fr;
        auto [rm, rp] = r_pm_theta(theta, alpha);
        out.points[i] = SpectrumSamplePoint{lam, theta, rm, rp};
        out.integral[i] = is_int ? 1 : 0;
    });
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& pt : out.points) inf = std::min(inf, pt.r_minus);
    out.inf_r_minus = inf;
    return out;
}

struct ResidueAnalysis {
    bool ok = false;
    std::vector<Rational> residues;  // distinct values of a.(lambda+beta) mod 1
};

// Rational data over a lattice: a.(o + beta) + sum_k n_k (a.g_k) mod 1 ranges
// over base + (1/Q)Z with Q the lcm of the reduced denominators of the
// generator products, so the residue set is finite and closed-form.
ResidueAnalysis lattice_residues(const LatticeCosets& lat, const ExactVec& a,
                                 const ExactVec& beta) {
    ResidueAnalysis out;
    Integer q_lcm = 1;
    for (const auto& g : lat.generators) {
        ExactScalar s = dot(a, g);
        if (!s.is_rational()) return out;
        q_lcm = boost::multiprecision::lcm(q_lcm, boost::multiprecision::denominator(s.as_rational()));
        if (q_lcm > 4096) return out;  // desk-scale cap; caller falls back to scanning
    }
    std::vector<ExactVec> offsets = lat.offsets;
    if (offsets.empty()) offsets.push_back(zero_vec(static_cast<int>(a.size())));
    long q = q_lcm.convert_to<long>();
    for (const auto& o : offsets) {
        ExactScalar base = dot(a, vec_add(o, beta));
        if (!base.is_rational()) return out;
        Rational b = rational_frac(base.as_rational());
        for (long j = 0; j < q; ++j)
            out.residues.push_back(rational_frac(b + Rational(Integer(j), q_lcm)));
    }
    std::sort(out.residues.begin(), out.residues.end());
    out.residues.erase(std::unique(out.residues.begin(), out.residues.end()),
                       out.residues.end());
    out.ok = true;
    return out;
}

ResidueAnalysis finite_residues(const FiniteSet& fin, const ExactVec& a, const ExactVec& beta) {
    ResidueAnalysis out;
    for (const auto& p : fin.points) {
        ExactScalar v = dot(a, vec_add(p, beta));
        if (!v.is_rational()) return out;
        out.residues.push_back(rational_frac(v.as_rational()));
    }
    std::sort(out.residues.begin(), out.residues.end());
    out.residues.erase(std::unique(out.residues.begin(), out.residues.end()),
                       out.residues.end());
    out.ok = true;
    return out;
}

std::optional<ExactVec> find_integral_witness(const SpectrumSpec& lambda, const ExactVec& a,
                                              const ExactVec& beta, const ExactScalar& radius) {
    ExactScalar r = radius;
    for (int round = 0; round < 3; ++round) {
        for (const auto& pt : lambda.enumerate(r)) {
            try {
                if (dot(a, vec_add(pt, beta)).is_integer()) return pt;
            } catch (const ExactnessError&) {
            }
        }
        r = r * ExactScalar(4) + ExactScalar(4);
    }
    return std::nullopt;
}

// Intersection of (Lambda + beta) with Lambda2 over the truncation, exact
// point comparison against the (slightly enlarged) second enumeration.
bool sets_disjoint_over_truncation(const std::vector<ExactVec>& sample, const ExactVec& beta,
                                   const SpectrumSpec& lambda2, const ExactScalar& radius) {
    ExactScalar pad(0);
    for (const auto& b : beta)
        if (pad < b.abs()) pad = b.abs();
    std::vector<ExactVec> second = lambda2.enumerate(radius + pad + ExactScalar(1));
    for (const auto& lam : sample) {
        ExactVec shifted = vec_add(lam, beta);
        auto it = std::lower_bound(second.begin(), second.end(), shifted, lex_less);
        if (it != second.end() && *it == shifted) return false;
    }
    return true;
}

}  // namespace

double alpha_of(const Domain& omega, const Domain& omega2) {
    if (omega.dim() != omega2.dim())
        throw ArgumentError("geometry.dim-mismatch", "domains must share one ambient dimension");
    if (!cell_contained(omega, omega2))
        throw HypothesisError("two-translate.not-contained",
                              "base domain is not contained in the extension domain");
    ExactScalar ratio = (ExactScalar(2) * omega2.volume()) / omega.volume();
    return ratio.to_double();
}

std::pair<double, double> r_pm_theta(double theta, double alpha) {
    if (!(alpha > 0.0))
        throw ArgumentError("two-translate.alpha-positive", "alpha must be positive");
    if (!std::isfinite(theta))
        throw NumericDomainError("numeric.nonfinite", "theta must be finite");
    double s = std::sin(0.5 * theta);
    double one_minus_cos = 2.0 * s * s;  // cancellation-free 1 - cos(theta)
    double tr = 2.0 + alpha;
    double disc = tr * tr - 4.0 * alpha * one_minus_cos;
    if (disc < 0.0) {
        if (disc > -1e-9 * tr * tr)
            disc = 0.0;
        else
            throw NumericDomainError("two-translate.negative-discriminant",
                                     "spectral discriminant negative beyond rounding");
    }
    double r_plus = tr + std::sqrt(disc);
    double r_minus = (4.0 * alpha * one_minus_cos) / r_plus;  // product identity, stable near 0
    return {r_minus, r_plus};
}

std::pair<double, double> r_pm(const ExactVec& lambda, const ExactVec& beta, const ExactVec& a,
                               double alpha) {
    if (lambda.size() != beta.size() || lambda.size() != a.size())
        throw ArgumentError("geometry.dim-mismatch", "vectors must share one ambient dimension");
    double fr;
    try {
        ExactScalar v = dot(a, vec_add(lambda, beta));
        fr = v.is_integer() ? 0.0 : v.frac().to_double();
    } catch (const ExactnessError&) {
        double v = 0.0;
        for (size_t j = 0; j < a.size(); ++j)
            v += a[j].to_double() * (lambda[j].to_double() + beta[j].to_double());
        fr = v - std::floor(v);
    }
    return r_pm_theta(2.0 * std::numbers::pi * fr, alpha);
}

SpectralResolution spectral_resolution(const TwoTranslateProblem& problem,
                                       const ExactScalar& truncation_radius) {
    require_dims(problem);
    auto [mode, alpha] = resolve_mode_alpha(problem);
    OverlapClass oc = check_no_overlap(problem.omega, {zero_vec(problem.omega.dim()), problem.a});
    if (oc != OverlapClass::Disjoint)
        throw HypothesisError("two-translate.domain-overlap",
                              oc == OverlapClass::Overlap
                                  ? "domain meets its own translate on positive volume"
                                  : "domain touches its own translate; disjoint closures required");
    require_annihilates(problem.a, problem.lambda2, truncation_radius);

    std::vector<ExactVec> sample = problem.lambda.enumerate(truncation_radius);
    if (sample.empty())
        throw ArgumentError("two-translate.empty-sample",
                            "spectrum truncation produced no points");
    SamplePass pass = run_sample_pass(sample, problem.a, problem.beta, alpha);
    SpectralResolution out;
    out.points = std::move(pass.points);
    out.mode = mode;
    out.alpha = alpha;
    return out;
}

GspDecision decide_gsp(const TwoTranslateProblem& problem, const ExactScalar& truncation_radius) {
    require_dims(problem);
    GspDecision d;
    auto [mode, alpha] = resolve_mode_alpha(problem);
    d.mode = mode;
    d.alpha = alpha;

    OverlapClass oc = check_no_overlap(problem.omega, {zero_vec(problem.omega.dim()), problem.a});
    if (oc != OverlapClass::Disjoint)
        throw HypothesisError("two-translate.domain-overlap",
                              oc == OverlapClass::Overlap
                                  ? "domain meets its own translate on positive volume"
                                  : "domain touches its own translate; disjoint closures required");
    require_annihilates(problem.a, problem.lambda2, truncation_radius);

    std::vector<ExactVec> sample = problem.lambda.enumerate(truncation_radius);
    if (sample.empty())
        throw ArgumentError("two-translate.empty-sample",
                            "spectrum truncation produced no points");
    SamplePass pass = run_sample_pass(sample, problem.a, problem.beta, alpha);
    d.spectrum_sample = std::move(pass.points);
    d.inf_r_minus = pass.inf_r_minus;

    // Condition (ii): a pairs rationally with the whole spectrum.
    AnnihilatorResult ann = rational_annihilator_contains(problem.a, problem.lambda);
    d.condition_ii = ann.contains;
    d.condition_ii_witness = ann.witness;

    // Condition (i), pointwise form: a.(lambda+beta) never lands in Z.  The
    // literal annihilator form (not every lambda lands in Z) is reported
    // alongside; the decision uses the pointwise reading.
    ResidueAnalysis res;
    if (const LatticeCosets* lat = problem.lambda.lattice())
        res = lattice_residues(*lat, problem.a, problem.beta);
    else if (const FiniteSet* fin = problem.lambda.finite())
        res = finite_residues(*fin, problem.a, problem.beta);
    d.exact_mode = res.ok;
    if (res.ok) {
        d.residues = res.residues;
        bool zero_residue =
            std::binary_search(d.residues.begin(), d.residues.end(), Rational(0));
        d.condition_i = !zero_residue;
        d.condition_i_literal = !(d.residues.size() == 1 && d.residues[0] == 0);
        double inf_res = std::numeric_limits<double>::infinity();
        for (const auto& r : d.residues) {
            auto [rm, rp] = r_pm_theta(2.0 * std::numbers::pi * to_double(r), alpha);
            (void)rp;
            inf_res = std::min(inf_res, r == 0 ? 0.0 : rm);
        }
        d.residue_min_r_minus = inf_res;
        if (zero_residue)
            d.condition_i_witness =
                find_integral_witness(problem.lambda, problem.a, problem.beta, truncation_radius);
    } else {
        bool any_integral = false;
        bool all_integral = true;
        for (size_t i = 0; i < sample.size(); ++i) {
            if (pass.integral[i]) {
                if (!any_integral) d.condition_i_witness = sample[i];
                any_integral = true;
            } else {
                all_integral = false;
            }
        }
        d.condition_i = !any_integral;
        d.condition_i_literal = !all_integral;
        d.residue_min_r_minus = d.inf_r_minus;
    }

    d.is_gsp = d.condition_i && d.condition_ii;

    d.lambda_sets_disjoint =
        sets_disjoint_over_truncation(sample, problem.beta, problem.lambda2, truncation_radius);
    d.constants_halved = !d.lambda_sets_disjoint;
    return d;
}

}  // namespace af
