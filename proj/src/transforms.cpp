#include "af/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

namespace af {

namespace {

constexpr double kEps = 2.3e-16;  // double ulp with headroom

// --- exact vanishing test for sums of roots of unity -------------------------
//
// A sum of e^{i 2 pi p/q} terms is an integer-coefficient polynomial evaluated
// at a primitive Q-th root of unity (Q = lcm of the q's).  Z[x]/Phi_Q is
// isomorphic to Z[zeta_Q], so the sum vanishes exactly when the polynomial
// reduces to zero modulo the Q-th cyclotomic polynomial.

using Poly = std::vector<Integer>;  // ascending coefficients

Poly poly_divide_exact(Poly num, const Poly& den) {
    // den is monic; division is exact by construction here.
    Poly out(num.size() - den.size() + 1, Integer(0));
    for (size_t k = out.size(); k-- > 0;) {
        Integer lead = num[k + den.size() - 1];
        out[k] = lead;
        if (lead == 0) continue;
        for (size_t j = 0; j < den.size(); ++j) num[k + j] -= lead * den[j];
    }
    return out;
}

const Poly& cyclotomic(long n) {
    static std::map<long, Poly> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::function<const Poly&(long)> get = [&](long m) -> const Poly& {
        auto hit = cache.find(m);
        if (hit != cache.end()) return hit->second;
        Poly p(static_cast<size_t>(m) + 1, Integer(0));
        p[0] = -1;
        p[static_cast<size_t>(m)] = 1;  // x^m - 1
        for (long d = 1; d < m; ++d)
            if (m % d == 0) p = poly_divide_exact(std::move(p), get(d));
        return cache.emplace(m, std::move(p)).first->second;
    };
    return get(n);
}

bool roots_of_unity_sum_is_zero(const std::vector<Rational>& fracs) {
    if (fracs.empty()) return true;
    Integer q_big = 1;
    for (const auto& r : fracs) q_big = boost::multiprecision::lcm(q_big, denominator(r));
    if (q_big > 100000)
        throw ExactnessError("transforms.phase-denominator",
                             "common phase denominator too large for the exact zero test");
    long q = q_big.convert_to<long>();
    std::vector<Integer> counts(static_cast<size_t>(q), Integer(0));
    for (const auto& r : fracs) {
        Integer k = numerator(r) * (q_big / denominator(r));
        counts[static_cast<size_t>(k.convert_to<long>())] += 1;
    }
    // Reduce modulo Phi_q (monic, degree deg).
    const Poly& phi = cyclotomic(q);
    size_t deg = phi.size() - 1;
    for (size_t k = counts.size(); k-- > deg;) {
        Integer lead = counts[k];
        if (lead == 0) continue;
        counts[k] = 0;
        for (size_t j = 0; j < deg; ++j) counts[k - deg + j] -= lead * phi[j];
    }
    for (size_t k = 0; k < deg && k < counts.size(); ++k)
        if (counts[k] != 0) return false;
    return true;
}

}  // namespace

ComplexValue phase_sum(const std::vector<ExactScalar>& phases) {
    ComplexValue s{0.0, 0.0};
    for (const auto& p : phases) s += unit_exponential(p.frac().to_double());
    return s;
}

bool phase_sum_is_zero(const std::vector<ExactScalar>& phases) {
    if (phases.empty()) return true;
    // Group phases into classes with pairwise rational differences; each class
    // contributes (unimodular class factor) * (sum of roots of unity).
    struct Class {
        ExactScalar rep;
        std::vector<Rational> offsets;
    };
    std::vector<Class> classes;
    for (const auto& p : phases) {
        bool placed = false;
        for (auto& c : classes) {
            try {
                ExactScalar d = p - c.rep;
                if (d.is_rational()) {
                    c.offsets.push_back(rational_frac(d.as_rational()));
                    placed = true;
                    break;
                }
            } catch (const ExactnessError&) {
                // different quadratic fields: difference is irrational
            }
        }
        if (!placed) classes.push_back({p, {Rational(0)}});
    }
    int live = 0;
    for (const auto& c : classes)
        if (!roots_of_unity_sum_is_zero(c.offsets)) ++live;
    if (live == 0) return true;
    if (live == 1) return false;  // a single surviving unimodular-scaled nonzero term
    throw ExactnessError("transforms.mixed-irrational-phases",
                         "cannot decide vanishing of a mixed irrational phase sum exactly");
}

ComplexValue phi_B(const std::vector<RationalVec>& B, const ExactVec& xi) {
    if (B.empty()) throw ArgumentError("transforms.empty-translates", "phase sum over empty set");
    std::vector<ExactScalar> phases;
    phases.reserve(B.size());
    for (const auto& b : B) phases.push_back(dot(to_exact(b), xi));
    return phase_sum(phases);
}

ComplexValue phi_B(const std::vector<RationalVec>& B, const Eigen::VectorXd& xi) {
    if (B.empty()) throw ArgumentError("transforms.empty-translates", "phase sum over empty set");
    ComplexValue s{0.0, 0.0};
    for (const auto& b : B) {
        double phase = 0;
        for (size_t i = 0; i < b.size(); ++i) phase += to_double(b[i]) * xi[static_cast<Eigen::Index>(i)];
        s += unit_exponential(phase);
    }
    return s;
}

bool phi_B_is_zero(const std::vector<RationalVec>& B, const ExactVec& xi) {
    if (B.empty()) throw ArgumentError("transforms.empty-translates", "phase sum over empty set");
    std::vector<ExactScalar> phases;
    phases.reserve(B.size());
    for (const auto& b : B) phases.push_back(dot(to_exact(b), xi));
    return phase_sum_is_zero(phases);
}

TransformValue chi_hat(const Domain& omega, const ExactVec& lambda) {
    if (static_cast<int>(lambda.size()) != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "frequency dimension mismatch");

    // Translate phase sum: sum_t e^{-i 2 pi lambda . t}.
    ComplexValue tsum{0.0, 0.0};
    for (const auto& t : omega.translates())
        tsum += std::conj(unit_exponential(dot(lambda, t).frac().to_double()));

    // Corner phase e^{-i 2 pi lambda . corner}.
    ComplexValue corner = std::conj(unit_exponential(dot(lambda, omega.corner()).frac().to_double()));

    // Per-axis interval transform on [0, h]: (1 - e^{-i 2 pi nu h}) / (i 2 pi nu).
    ComplexValue axes{1.0, 0.0};
    for (int i = 0; i < omega.dim(); ++i) {
        const ExactScalar& nu = lambda[static_cast<size_t>(i)];
        const ExactScalar& h = omega.edges()[static_cast<size_t>(i)];
        if (nu.is_zero()) {
            axes *= h.to_double();
            continue;
        }
        ExactScalar nu_h = nu * h;
        if (nu_h.is_integer()) return {{0.0, 0.0}, 0.0};
        ComplexValue num = 1.0 - std::conj(unit_exponential(nu_h.frac().to_double()));
        axes *= num / ComplexValue(0.0, 2.0 * std::numbers::pi * nu.to_double());
    }
    return {tsum * corner * axes, 0.0};
}

bool chi_hat_is_zero(const Domain& omega, const ExactVec& lambda) {
    if (static_cast<int>(lambda.size()) != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "frequency dimension mismatch");
    for (int i = 0; i < omega.dim(); ++i) {
        const ExactScalar& nu = lambda[static_cast<size_t>(i)];
        if (nu.is_zero()) continue;
        if ((nu * omega.edges()[static_cast<size_t>(i)]).is_integer()) return true;
    }
    std::vector<ExactScalar> phases;
    phases.reserve(omega.translates().size());
    for (const auto& t : omega.translates()) phases.push_back(dot(lambda, t));
    return phase_sum_is_zero(phases);
}

void require_iterable(const AffineSystem& sys) {
    if (sys.B.empty())
        throw ArgumentError("transforms.empty-translates", "measure iteration needs translates");
    if (!is_expansive(sys.R))
        throw ArgumentError("transforms.nonexpansive",
                            "measure iteration needs an expansive matrix");
}

TransformValue mu_hat_n(const AffineSystem& sys, const Domain& initial, int n,
                        const ExactVec& lambda) {
    if (n < 0) throw ArgumentError("transforms.negative-depth", "depth must be nonnegative");
    require_iterable(sys);
    RationalMatrix sinv = sys.R.transpose().inverse();
    ExactVec xi = lambda;
    ComplexValue prod{1.0, 0.0};
    double inv_b = 1.0 / static_cast<double>(sys.B.size());
    for (int k = 0; k < n; ++k) {
        xi = sinv.apply(xi);
        prod *= std::conj(phi_B(sys.B, xi)) * inv_b;
    }
    TransformValue base = chi_hat(initial, xi);
    double vol = initial.volume().to_double();
    double rounding = kEps * (16.0 + 8.0 * n * (static_cast<double>(sys.B.size()) + 1.0));
    return {prod * base.value / vol, rounding};
}

TransformValue mu_hat_limit(const AffineSystem& sys, const ExactVec& lambda,
                            double tail_target) {
    require_iterable(sys);
    RationalMatrix sinv_exact = sys.R.transpose().inverse();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sinv_exact.to_double());
    double c = svd.singularValues()(0);
    if (c >= 1.0 - 1e-12)
        throw NumericDomainError("transforms.noncontractive-dual",
                                 "dual inverse has operator norm >= 1; the product tail "
                                 "bound does not converge geometrically");
    double b_max = 0.0;
    for (const auto& b : sys.B) {
        double norm = 0.0;
        for (const auto& q : b) norm += to_double(q) * to_double(q);
        b_max = std::max(b_max, std::sqrt(norm));
    }

    ExactVec xi = lambda;
    ComplexValue prod{1.0, 0.0};
    double inv_b = 1.0 / static_cast<double>(sys.B.size());
    double tail = 0.0;
    int k = 0;
    for (k = 1; k <= 200; ++k) {
        xi = sinv_exact.apply(xi);
        prod *= std::conj(phi_B(sys.B, xi)) * inv_b;
        double xi_norm = to_double(xi).norm();
        tail = 2.0 * std::numbers::pi * b_max * xi_norm * c / (1.0 - c);
        if (tail <= tail_target) break;
    }
    if (tail > tail_target)
        throw NumericDomainError("transforms.tail-budget",
                                 "infinite-product tail did not reach the target within "
                                 "200 factors");
    double rounding = kEps * (16.0 + 8.0 * k * (static_cast<double>(sys.B.size()) + 1.0));
    return {prod, std::expm1(tail) + rounding};
}

TransformValue f_dmu_hat(const AffineSystem& sys, const Domain& initial, int n,
                         const ExactVec& t, const ExactVec& lambda) {
    if (t.size() != lambda.size())
        throw ArgumentError("geometry.dim-mismatch", "modulation dimension mismatch");
    ExactVec shifted(lambda.size());
    for (size_t i = 0; i < lambda.size(); ++i) shifted[i] = lambda[i] - t[i];
    return mu_hat_n(sys, initial, n, shifted);
}

}  // namespace af
