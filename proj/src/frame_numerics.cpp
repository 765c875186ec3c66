#include "af/frame_numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "af/errors.hpp"
#include "af/parallel.hpp"
#include "af/transforms.hpp"

namespace af {

namespace {

constexpr long kMaxModes = 4096;
constexpr int kMaxIterations = 20000;

// sum_{k=0}^{n-1} e^{i 2 pi delta (k+1/2) / n}: the quadrature pairing of one
// resolved mode against one spectrum frequency along one axis.  Plain
// summation in fixed order keeps the result bit-stable.
ComplexValue axis_sum(double delta, int n) {
    ComplexValue acc(0.0, 0.0);
    double step = 2.0 * std::numbers::pi * delta / static_cast<double>(n);
    for (int k = 0; k < n; ++k) acc += std::polar(1.0, step * (static_cast<double>(k) + 0.5));
    return acc;
}

double cell_phase_fraction(const ExactVec& lambda, const ExactVec& anchor) {
    try {
        return dot(lambda, anchor).frac().to_double();
    } catch (const ExactnessError&) {
        double v = 0.0;
        for (size_t i = 0; i < lambda.size(); ++i) v += lambda[i].to_double() * anchor[i].to_double();
        return v - std::floor(v);
    }
}

struct RayleighResult {
    double value = 0.0;
    int iterations = 0;
};

RayleighResult power_iteration(const Eigen::MatrixXcd& H) {
    auto m = H.rows();
    Eigen::VectorXcd v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v(i) = ComplexValue(1.0 + 0.5 * static_cast<double>(i) / static_cast<double>(m), 0.0);
    v.normalize();
    double mu = 0.0;
    RayleighResult out;
    for (int it = 1; it <= kMaxIterations; ++it) {
        Eigen::VectorXcd w = H * v;
        double mu_new = v.dot(w).real();
        out.iterations = it;
        if (it > 1 && std::abs(mu_new - mu) <= 1e-8 * std::max(std::abs(mu_new), 1e-30)) {
            out.value = mu_new;
            return out;
        }
        mu = mu_new;
        double nrm = w.norm();
        if (nrm <= 0.0) {
            out.value = 0.0;
            return out;
        }
        v = w / nrm;
    }
    out.value = mu;
    return out;
}

RayleighResult inverse_iteration(const Eigen::MatrixXcd& H) {
    auto m = H.rows();
    double trace = H.real().trace();
    double eps = 1e-12 * (trace / static_cast<double>(m)) + 1e-300;
    Eigen::MatrixXcd shifted = H + eps * Eigen::MatrixXcd::Identity(m, m);
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(shifted);
    if (ldlt.info() != Eigen::Success)
        throw NumericDomainError("frame.factorization-failure",
                                 "shifted form could not be factorized");
    Eigen::VectorXcd v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v(i) = ComplexValue(1.0 + 0.5 * static_cast<double>(i) / static_cast<double>(m), 0.0);
    v.normalize();
    double mu = 0.0;
    RayleighResult out;
    for (int it = 1; it <= kMaxIterations; ++it) {
        Eigen::VectorXcd y = ldlt.solve(v);
        double nrm = y.norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            out.value = 0.0;
            return out;
        }
        v = y / nrm;
        double mu_new = v.dot(H * v).real();
        out.iterations = it;
        if (it > 1 && std::abs(mu_new - mu) <= 1e-8 * std::max(std::abs(mu_new), 1e-30)) {
            out.value = mu_new;
            return out;
        }
        mu = mu_new;
    }
    out.value = mu;
    return out;
}

}  // namespace

GridFrameEstimate estimate_bounds(const Domain& omega, const SpectrumSpec& lambda, int grid_n,
                                  const ExactScalar& radius) {
    if (omega.dim() == 0)
        throw ArgumentError("frame.empty-domain", "domain must have positive dimension");
    if (lambda.dim() != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "spectrum dimension differs");
    if (grid_n < 8)
        throw ArgumentError("frame.grid-too-small", "need at least 8 grid points per edge");
    if (!(radius > ExactScalar(0)))
        throw ArgumentError("frame.bad-radius", "truncation radius must be positive");

    int d = omega.dim();
    double radius_d = radius.to_double();
    std::vector<double> h(static_cast<size_t>(d));
    double cell_vol = 1.0;
    for (int i = 0; i < d; ++i) {
        h[static_cast<size_t>(i)] = omega.edges()[static_cast<size_t>(i)].to_double();
        cell_vol *= h[static_cast<size_t>(i)];
    }

    // Modes per axis: resolvable by the grid (Nyquist headroom) and reachable
    // by the truncated spectrum.
    std::vector<long> m_max(static_cast<size_t>(d));
    long modes_per_cell = 1;
    for (int i = 0; i < d; ++i) {
        long reach = static_cast<long>(std::floor(radius_d * h[static_cast<size_t>(i)] / 2.0));
        long nyq = grid_n / 4;
        m_max[static_cast<size_t>(i)] = std::max(1L, std::min(reach, nyq));
        modes_per_cell *= 2 * m_max[static_cast<size_t>(i)] + 1;
    }
    long cells = static_cast<long>(omega.translates().size());
    long m_total = cells * modes_per_cell;
    if (m_total > kMaxModes)
        throw ArgumentError("frame.too-many-modes",
                            "resolved subspace exceeds the supported size");

    GridFrameEstimate est;
    long nodes_per_cell = 1;
    for (int i = 0; i < d; ++i) nodes_per_cell *= grid_n;
    est.grid_points_per_cell = nodes_per_cell;
    est.lambda_truncation = radius_d;
    est.resolved_modes = m_total;
    est.volume = omega.volume().to_double();

    std::vector<ExactVec> pts = lambda.enumerate(radius);
    // Drop frequencies the grid cannot represent: past grid_n/2 cycles per
    // cell edge the sampled exponential aliases onto a resolved mode and the
    // quadrature pairing becomes garbage (worst case a full spurious unit).
    std::erase_if(pts, [&](const ExactVec& p) {
        for (int i = 0; i < d; ++i) {
            double cyc = std::abs(p[static_cast<size_t>(i)].to_double()) * h[static_cast<size_t>(i)];
            if (cyc > static_cast<double>(grid_n) / 2.0 + 1e-9) return true;
        }
        return false;
    });
    if (pts.empty()) {
        est.degenerate = true;
        return est;
    }
    auto L = static_cast<Eigen::Index>(pts.size());

    // Per-axis pairing tables: table[i] is (#lambda) x (2 m_max_i + 1).
    std::vector<Eigen::MatrixXcd> table(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        auto& t = table[static_cast<size_t>(i)];
        long mm = m_max[static_cast<size_t>(i)];
        t.resize(L, 2 * mm + 1);
        parallel_for(pts.size(), default_thread_count(), [&](size_t p) {
            double li = pts[p][static_cast<size_t>(i)].to_double() * h[static_cast<size_t>(i)];
            for (long m = -mm; m <= mm; ++m)
                t(static_cast<Eigen::Index>(p), m + mm) =
                    axis_sum(li - static_cast<double>(m), grid_n);
        });
    }

    // Rows of C: one per (cell, mode multi-index); C = (pairings) with the
    // cell anchor phase in front.
    Eigen::MatrixXcd C(m_total, L);
    std::vector<ExactVec> anchors;
    anchors.reserve(static_cast<size_t>(cells));
    for (const auto& t : omega.translates()) {
        ExactVec a(t.size());
        for (size_t i = 0; i < t.size(); ++i) a[i] = t[i] + omega.corner()[i];
        anchors.push_back(std::move(a));
    }
    Eigen::MatrixXcd cell_phase(static_cast<Eigen::Index>(cells), L);
    parallel_for(pts.size(), default_thread_count(), [&](size_t p) {
        for (long c = 0; c < cells; ++c) {
            double fr = cell_phase_fraction(pts[p], anchors[static_cast<size_t>(c)]);
            cell_phase(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(p)) =
                std::polar(1.0, 2.0 * std::numbers::pi * fr);
        }
    });
    parallel_for(static_cast<size_t>(m_total), default_thread_count(), [&](size_t row) {
        long c = static_cast<long>(row) / modes_per_cell;
        long rem = static_cast<long>(row) % modes_per_cell;
        std::vector<long> mi(static_cast<size_t>(d));
        for (int i = d - 1; i >= 0; --i) {
            long span = 2 * m_max[static_cast<size_t>(i)] + 1;
            mi[static_cast<size_t>(i)] = rem % span - m_max[static_cast<size_t>(i)];
            rem /= span;
        }
        for (Eigen::Index p = 0; p < L; ++p) {
            ComplexValue prod = cell_phase(static_cast<Eigen::Index>(c), p);
            for (int i = 0; i < d; ++i)
                prod *= table[static_cast<size_t>(i)](
                    p, mi[static_cast<size_t>(i)] + m_max[static_cast<size_t>(i)]);
            C(static_cast<Eigen::Index>(row), p) = prod;
        }
    });

    Eigen::MatrixXcd H = C * C.adjoint();
    double factor = cell_vol / (static_cast<double>(nodes_per_cell) * static_cast<double>(nodes_per_cell));

    RayleighResult top = power_iteration(H);
    RayleighResult bottom = inverse_iteration(H);
    est.K_hat = factor * std::max(top.value, 0.0);
    est.k_hat = factor * std::max(bottom.value, 0.0);
    if (est.k_hat > est.K_hat) std::swap(est.k_hat, est.K_hat);
    est.rayleigh_iterations = top.iterations + bottom.iterations;
    est.degenerate = est.k_hat < 1e-12;
    return est;
}

ScaledPair scale_pair(const RationalMatrix& R, const Domain& omega, const SpectrumSpec& lambda) {
    if (R.rows() != omega.dim() || R.cols() != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "matrix must be square of domain dimension");
    if (lambda.dim() != omega.dim())
        throw ArgumentError("geometry.dim-mismatch", "spectrum dimension differs");
    AffineSystem sys;
    sys.R = R;
    sys.B.push_back(RationalVec(static_cast<size_t>(omega.dim()), Rational(0)));
    ScaledPair out{apply_affine(sys, omega), SpectrumSpec()};

    RationalMatrix rt = R.transpose();
    if (const LatticeCosets* lat = lambda.lattice()) {
        LatticeCosets mapped;
        for (const auto& g : lat->generators) mapped.generators.push_back(rt.apply(g));
        for (const auto& o : lat->offsets) mapped.offsets.push_back(rt.apply(o));
        out.lambda = SpectrumSpec(std::move(mapped));
    } else if (const FiniteSet* fin = lambda.finite()) {
        FiniteSet mapped;
        for (const auto& p : fin->points) mapped.points.push_back(rt.apply(p));
        std::sort(mapped.points.begin(), mapped.points.end(), lex_less);
        out.lambda = SpectrumSpec(std::move(mapped));
    } else {
        throw ArgumentError("frame.unsupported-spectrum",
                            "scaling supports lattice and finite spectra");
    }
    return out;
}

ComplexValue exact_frame_coefficient(const Domain& omega, const TrigPoly& f,
                                     const ExactVec& lambda) {
    if (f.freqs.size() != f.coeffs.size())
        throw ArgumentError("frame.poly-shape", "frequency and coefficient counts differ");
    ComplexValue acc(0.0, 0.0);
    for (size_t m = 0; m < f.freqs.size(); ++m) {
        if (f.freqs[m].size() != lambda.size())
            throw ArgumentError("geometry.dim-mismatch", "frequency dimension differs");
        ExactVec shift(lambda.size());
        for (size_t i = 0; i < lambda.size(); ++i)
            shift[i] = lambda[i] - ExactScalar(f.freqs[m][i]);
        acc += f.coeffs[m] * chi_hat(omega, shift).value;
    }
    return acc;
}

double exact_frame_sum(const Domain& omega, const TrigPoly& f, const SpectrumSpec& lambda,
                       const ExactScalar& radius) {
    std::vector<ExactVec> pts = lambda.enumerate(radius);
    std::vector<double> terms(pts.size(), 0.0);
    parallel_for(pts.size(), default_thread_count(), [&](size_t i) {
        ComplexValue v = exact_frame_coefficient(omega, f, pts[i]);
        terms[i] = std::norm(v);
    });
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

double trig_norm_sq(const Domain& omega, const TrigPoly& f) {
    if (f.freqs.size() != f.coeffs.size())
        throw ArgumentError("frame.poly-shape", "frequency and coefficient counts differ");
    ComplexValue acc(0.0, 0.0);
    for (size_t a = 0; a < f.freqs.size(); ++a)
        for (size_t b = 0; b < f.freqs.size(); ++b) {
            ExactVec diff(f.freqs[a].size());
            for (size_t i = 0; i < diff.size(); ++i)
                diff[i] = ExactScalar(Rational(f.freqs[b][i] - f.freqs[a][i]));
            acc += std::conj(f.coeffs[a]) * f.coeffs[b] * std::conj(chi_hat(omega, diff).value);
        }
    return acc.real();
}

}  // namespace af
