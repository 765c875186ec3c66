#include "af/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "af/errors.hpp"
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

}  // namespace

IterationState make_initial_state(AffineSystem system, Domain omega0,
                                  std::vector<ExactVec> lambda0) {
    require_iterable(system);
    if (system.L.empty())
        throw ArgumentError("geometry.empty-translates", "spectrum-side translate set is empty");
    if (system.R.rows() != omega0.dim())
        throw ArgumentError("geometry.dim-mismatch", "matrix and domain dimension differ");
    if (lambda0.empty()) lambda0.push_back(ExactVec(static_cast<size_t>(omega0.dim()), ExactScalar(0)));
    for (const auto& p : lambda0)
        if (static_cast<int>(p.size()) != omega0.dim())
            throw ArgumentError("geometry.dim-mismatch", "seed spectrum dimension differs");
    std::sort(lambda0.begin(), lambda0.end(), lex_less);
    lambda0.erase(std::unique(lambda0.begin(), lambda0.end()), lambda0.end());

    IterationState st;
    st.system = std::move(system);
    st.j = 0;
    st.omegas.push_back(std::move(omega0));
    st.lambdas.push_back(std::move(lambda0));
    return st;
}

IterationState iterate(const IterationState& state) {
    if (state.omegas.empty())
        throw ArgumentError("ifs.uninitialized", "iteration state has no level-0 data");
    IterationState next = state;
    const AffineSystem& sys = next.system;

    Domain omega_next = apply_affine(sys, next.omegas.back());
    OverlapClass oc = check_no_overlap(omega_next);
    if (oc == OverlapClass::Overlap)
        throw HypothesisError("ifs.domain-overlap",
                              "iterated domain copies overlap on positive volume");

    // Spectrum side with provenance so a collision can name its producers.
    RationalMatrix rt = sys.R.transpose();
    struct Tagged {
        ExactVec img;
        size_t li, si;
    };
    const std::vector<ExactVec>& cur = next.lambdas.back();
    std::vector<Tagged> images;
    images.reserve(sys.L.size() * cur.size());
    for (size_t li = 0; li < sys.L.size(); ++li) {
        ExactVec l = to_exact(sys.L[li]);
        for (size_t si = 0; si < cur.size(); ++si) {
            ExactVec shifted(cur[si].size());
            for (size_t k = 0; k < shifted.size(); ++k) shifted[k] = cur[si][k] + l[k];
            images.push_back(Tagged{rt.apply(shifted), li, si});
        }
    }
    std::sort(images.begin(), images.end(),
              [](const Tagged& a, const Tagged& b) { return lex_less(a.img, b.img); });
    for (size_t i = 0; i + 1 < images.size(); ++i) {
        if (images[i].img == images[i + 1].img) {
            std::ostringstream os;
            os << "spectrum images collide at depth " << (next.j + 1) << ": point "
               << vec_text(cur[images[i].si]) << " via translate "
               << vec_text(to_exact(sys.L[images[i].li])) << " and point "
               << vec_text(cur[images[i + 1].si]) << " via translate "
               << vec_text(to_exact(sys.L[images[i + 1].li])) << " both map to "
               << vec_text(images[i].img);
            throw HypothesisError("ifs.spectrum-collision", os.str());
        }
    }
    std::vector<ExactVec> lambda_next;
    lambda_next.reserve(images.size());
    for (auto& tg : images) lambda_next.push_back(std::move(tg.img));

    next.j += 1;
    next.omegas.push_back(std::move(omega_next));
    next.lambdas.push_back(std::move(lambda_next));
    next.overlaps.push_back(oc);
    return next;
}

SpectralSumEntry spectral_sum(const IterationState& state, const ExactVec& t, int j) {
    if (j < 0 || j > state.j)
        throw ArgumentError("ifs.depth-out-of-range",
                            "requested depth is outside the iterated range");
    if (static_cast<int>(t.size()) != state.omegas.front().dim())
        throw ArgumentError("geometry.dim-mismatch", "frequency dimension differs");
    const std::vector<ExactVec>& lam = state.lambdas[static_cast<size_t>(j)];
    std::vector<double> terms(lam.size(), 0.0), errs(lam.size(), 0.0);
    parallel_for(lam.size(), default_thread_count(), [&](size_t i) {
        TransformValue v = f_dmu_hat(state.system, state.omegas.front(), j, t, lam[i]);
        double m = std::abs(v.value);
        terms[i] = m * m;
        errs[i] = 2.0 * m * v.abs_error_bound + v.abs_error_bound * v.abs_error_bound;
    });
    double norm = std::pow(static_cast<double>(state.system.B.size()) /
                               static_cast<double>(state.system.L.size()),
                           j);
    double s = 0.0, e = 0.0;
    for (size_t i = 0; i < terms.size(); ++i) {
        s += terms[i];
        e += errs[i];
    }
    return SpectralSumEntry{j, norm * s, norm * e};
}

SpectralSumSeries spectral_sum_series(const IterationState& state, const ExactVec& t, int j_max) {
    if (j_max < 0 || j_max > state.j)
        throw ArgumentError("ifs.depth-out-of-range",
                            "requested depth is outside the iterated range");
    SpectralSumSeries series;
    for (int j = 0; j <= j_max; ++j) series.entries.push_back(spectral_sum(state, t, j));
    return series;
}

LowerBoundEstimate lower_bound_estimate(const IterationState& state, const ExactVec& t,
                                        int j_max, long mc_samples) {
    (void)mc_samples;  // |e_t| == 1 pointwise and mu is a probability measure
    if (j_max < 1)
        throw ArgumentError("ifs.depth-out-of-range", "lower bound needs depth at least 1");
    LowerBoundEstimate out;
    out.series = spectral_sum_series(state, t, j_max);
    double mn = out.series.entries.front().s;
    for (const auto& e : out.series.entries) mn = std::min(mn, e.s);
    out.f_norm_sq = 1.0;
    out.mc_skipped = true;
    out.epsilon_hat = mn / out.f_norm_sq;
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr long kStreamLen = 65536;  // samples per independent stream

}  // namespace

Eigen::MatrixXd chaos_game_sample(const AffineSystem& system, long n, std::uint64_t seed) {
    require_iterable(system);
    if (n < 1) throw ArgumentError("ifs.sample-count", "sample count must be at least 1");
    int d = system.R.rows();
    Eigen::MatrixXd rinv = system.R.inverse().to_double();
    Eigen::MatrixXd bmat(static_cast<Eigen::Index>(system.B.size()), d);
    for (size_t bi = 0; bi < system.B.size(); ++bi)
        for (int k = 0; k < d; ++k) bmat(static_cast<Eigen::Index>(bi), k) = to_double(system.B[bi][static_cast<size_t>(k)]);

    Eigen::MatrixXd out(n, d);
    long streams = (n + kStreamLen - 1) / kStreamLen;
    parallel_for(static_cast<size_t>(streams), default_thread_count(), [&](size_t w) {
        std::uint64_t s = seed ^ (0xd2b74407b1ce6e93ULL * (static_cast<std::uint64_t>(w) + 1));
        (void)splitmix64(s);  // decorrelate nearby seeds
        long lo = static_cast<long>(w) * kStreamLen;
        long hi = std::min(n, lo + kStreamLen);
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        size_t nb = system.B.size();
        for (int burn = 0; burn < 64; ++burn) {
            size_t bi = static_cast<size_t>(splitmix64(s) % nb);
            x = rinv * (x + bmat.row(static_cast<Eigen::Index>(bi)).transpose());
        }
        for (long i = lo; i < hi; ++i) {
            size_t bi = static_cast<size_t>(splitmix64(s) % nb);
            x = rinv * (x + bmat.row(static_cast<Eigen::Index>(bi)).transpose());
            out.row(i) = x.transpose();
        }
    });
    return out;
}

}  // namespace af
