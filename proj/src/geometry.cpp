#include "af/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace af {

ExactVec to_exact(const RationalVec& v) {
    ExactVec out;
    out.reserve(v.size());
    for (const auto& q : v) out.emplace_back(q);
    return out;
}

bool all_rational(const ExactVec& v) {
    return std::all_of(v.begin(), v.end(), [](const ExactScalar& x) { return x.is_rational(); });
}

RationalVec as_rational(const ExactVec& v) {
    RationalVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.as_rational());
    return out;
}

ExactScalar dot(const ExactVec& a, const ExactVec& b) {
    if (a.size() != b.size())
        throw ArgumentError("geometry.dim-mismatch", "dot product of different dimensions");
    ExactScalar s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool lex_less(const ExactVec& a, const ExactVec& b) {
    for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

Eigen::VectorXd to_double(const ExactVec& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].to_double();
    return out;
}

// --- RationalMatrix ----------------------------------------------------------

RationalMatrix::RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw ArgumentError("geometry.matrix-shape", "negative matrix dimension");
    a_.assign(static_cast<size_t>(rows) * cols, Rational(0));
}

RationalMatrix RationalMatrix::identity(int d) {
    RationalMatrix m(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::diagonal(const RationalVec& d) {
    RationalMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Rational RationalMatrix::determinant() const {
    if (rows_ != cols_) throw ArgumentError("geometry.matrix-shape", "determinant of non-square");
    RationalMatrix m = *this;
    Rational det = 1;
    for (int col = 0; col < cols_; ++col) {
        int pivot = -1;
        for (int r = col; r < rows_; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int j = 0; j < cols_; ++j) std::swap(m(pivot, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (int r = col + 1; r < rows_; ++r) {
            if (m(r, col) == 0) continue;
            Rational f = m(r, col) / m(col, col);
            for (int j = col; j < cols_; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

RationalMatrix RationalMatrix::inverse() const {
    if (rows_ != cols_) throw ArgumentError("geometry.matrix-shape", "inverse of non-square");
    int d = rows_;
    RationalMatrix m = *this, inv = identity(d);
    for (int col = 0; col < d; ++col) {
        int pivot = -1;
        for (int r = col; r < d; ++r)
            if (m(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            throw NumericDomainError("geometry.singular-matrix", "matrix is singular");
        if (pivot != col)
            for (int j = 0; j < d; ++j) {
                std::swap(m(pivot, j), m(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        Rational p = m(col, col);
        for (int j = 0; j < d; ++j) {
            m(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col || m(r, col) == 0) continue;
            Rational f = m(r, col);
            for (int j = 0; j < d; ++j) {
                m(r, j) -= f * m(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

RationalVec RationalMatrix::apply(const RationalVec& v) const {
    if (static_cast<int>(v.size()) != cols_)
        throw ArgumentError("geometry.dim-mismatch", "matrix-vector dimension mismatch");
    RationalVec out(static_cast<size_t>(rows_), Rational(0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

ExactVec RationalMatrix::apply(const ExactVec& v) const {
    if (static_cast<int>(v.size()) != cols_)
        throw ArgumentError("geometry.dim-mismatch", "matrix-vector dimension mismatch");
    ExactVec out(static_cast<size_t>(rows_), ExactScalar(0));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] += ExactScalar((*this)(i, j)) * v[j];
    return out;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
    Eigen::MatrixXd out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = af::to_double((*this)(i, j));
    return out;
}

bool RationalMatrix::is_scaled_permutation() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i) {
        int nz = 0;
        for (int j = 0; j < cols_; ++j) nz += (*this)(i, j) != 0;
        if (nz != 1) return false;
    }
    for (int j = 0; j < cols_; ++j) {
        int nz = 0;
        for (int i = 0; i < rows_; ++i) nz += (*this)(i, j) != 0;
        if (nz != 1) return false;
    }
    return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_)
        throw ArgumentError("geometry.dim-mismatch", "matrix product dimension mismatch");
    RationalMatrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            if (a(i, k) == 0) continue;
            for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

// --- Domain --------------------------------------------------------------------

Domain::Domain(ExactVec corner, ExactVec edges, std::vector<ExactVec> translates)
    : dim_(static_cast<int>(corner.size())),
      corner_(std::move(corner)),
      edges_(std::move(edges)),
      translates_(std::move(translates)) {
    if (edges_.size() != corner_.size())
        throw ArgumentError("geometry.dim-mismatch", "corner/edges dimension mismatch");
    for (const auto& e : edges_)
        if (e.sign() <= 0)
            throw ArgumentError("geometry.empty-box", "box edges must be positive");
    if (translates_.empty()) translates_.emplace_back(static_cast<size_t>(dim_), ExactScalar(0));
    for (const auto& t : translates_)
        if (static_cast<int>(t.size()) != dim_)
            throw ArgumentError("geometry.dim-mismatch", "translate dimension mismatch");
    std::sort(translates_.begin(), translates_.end(), lex_less);
    translates_.erase(std::unique(translates_.begin(), translates_.end()), translates_.end());
}

Domain Domain::box(ExactVec corner, ExactVec edges) {
    size_t d = corner.size();
    return Domain(std::move(corner), std::move(edges), {ExactVec(d, ExactScalar(0))});
}

Domain Domain::unit_interval() {
    return box(ExactVec{ExactScalar(0)}, ExactVec{ExactScalar(1)});
}

ExactScalar Domain::volume() const {
    ExactScalar v(static_cast<int>(translates_.size()));
    for (const auto& e : edges_) v *= e;
    return v;
}

bool Domain::contains(const ExactVec& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw ArgumentError("geometry.dim-mismatch", "point dimension mismatch");
    for (const auto& t : translates_) {
        bool inside = true;
        for (int i = 0; i < dim_ && inside; ++i) {
            ExactScalar lo = corner_[i] + t[i];
            ExactScalar rel = x[i] - lo;
            inside = rel.sign() >= 0 && (edges_[i] - rel).sign() >= 0;
        }
        if (inside) return true;
    }
    return false;
}

Domain Domain::merged(const Domain& a, const Domain& b) {
    if (a.dim_ != b.dim_ || a.corner_ != b.corner_ || a.edges_ != b.edges_)
        throw ArgumentError("geometry.shape-mismatch",
                            "merged domains must share the same base box");
    std::vector<ExactVec> ts = a.translates_;
    ts.insert(ts.end(), b.translates_.begin(), b.translates_.end());
    return Domain(a.corner_, a.edges_, std::move(ts));
}

Domain Domain::translated(const ExactVec& shift) const {
    if (static_cast<int>(shift.size()) != dim_)
        throw ArgumentError("geometry.dim-mismatch", "shift dimension mismatch");
    std::vector<ExactVec> ts = translates_;
    for (auto& t : ts)
        for (int i = 0; i < dim_; ++i) t[i] += shift[i];
    return Domain(corner_, edges_, std::move(ts));
}

namespace {

// Interval-overlap class of two translated copies of the same box union.
// Boxes share edge lengths, so the axis overlap of cells u, v is e_a - |du_a|.
OverlapClass copy_pair_class(const Domain& omega, const ExactVec& s, const ExactVec& t) {
    const auto& cells = omega.translates();
    const auto& e = omega.edges();
    bool touching = false;
    for (const auto& cu : cells)
        for (const auto& cv : cells) {
            bool disjoint = false, tight = false;
            for (int a = 0; a < omega.dim(); ++a) {
                ExactScalar delta = (cu[a] + s[a]) - (cv[a] + t[a]);
                int sign = (e[a] - delta.abs()).sign();
                if (sign < 0) {
                    disjoint = true;
                    break;
                }
                if (sign == 0) tight = true;
            }
            if (disjoint) continue;
            if (!tight) return OverlapClass::Overlap;
            touching = true;
        }
    return touching ? OverlapClass::NullOverlap : OverlapClass::Disjoint;
}

}  // namespace

OverlapClass check_no_overlap(const Domain& omega, const std::vector<ExactVec>& new_translates) {
    if (new_translates.empty())
        throw ArgumentError("geometry.empty-translates", "overlap check needs translates");
    for (const auto& t : new_translates)
        if (static_cast<int>(t.size()) != omega.dim())
            throw ArgumentError("geometry.dim-mismatch", "translate dimension mismatch");
    bool touching = false;
    for (size_t i = 0; i < new_translates.size(); ++i)
        for (size_t j = i + 1; j < new_translates.size(); ++j) {
            switch (copy_pair_class(omega, new_translates[i], new_translates[j])) {
                case OverlapClass::Overlap:
                    return OverlapClass::Overlap;
                case OverlapClass::NullOverlap:
                    touching = true;
                    break;
                case OverlapClass::Disjoint:
                    break;
            }
        }
    return touching ? OverlapClass::NullOverlap : OverlapClass::Disjoint;
}

OverlapClass check_no_overlap(const Domain& omega) {
    Domain cell = Domain::box(omega.corner(), omega.edges());
    return check_no_overlap(cell, omega.translates());
}

// --- affine maps -----------------------------------------------------------------

bool is_expansive(const RationalMatrix& R) {
    if (R.rows() != R.cols() || R.rows() == 0)
        throw ArgumentError("geometry.matrix-shape", "expansivity needs a square matrix");
    if (R.determinant() == 0)
        throw ArgumentError("geometry.singular-matrix", "expansivity needs an invertible matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(R.to_double(), false);
    if (solver.info() != Eigen::Success)
        throw NumericDomainError("geometry.eigen-failure", "eigenvalue computation failed");
    double min_mod = solver.eigenvalues().cwiseAbs().minCoeff();
    if (min_mod <= 1.0) return false;
    if (min_mod * (1.0 - 1e-9) >= 1.0) return true;
    throw IndeterminateError("geometry.expansivity-boundary",
                             "smallest eigenvalue modulus within 1e-9 of 1: "
                             "expansivity undecidable at working precision");
}

Domain apply_affine(const AffineSystem& sys, const Domain& omega) {
    if (!sys.R.is_scaled_permutation())
        throw ArgumentError("geometry.nonaligned-matrix",
                            "domain-side map needs a scaled permutation matrix "
                            "so boxes stay axis-aligned");
    if (sys.B.empty())
        throw ArgumentError("geometry.empty-translates", "domain-side translate set is empty");
    RationalMatrix rinv = sys.R.inverse();
    int d = omega.dim();

    // Image of the base box under R^{-1}: output axis i is fed by the unique
    // input axis j with rinv(i,j) != 0.
    ExactVec corner(static_cast<size_t>(d), ExactScalar(0));
    ExactVec edges(static_cast<size_t>(d), ExactScalar(0));
    for (int i = 0; i < d; ++i) {
        int j = 0;
        while (rinv(i, j) == 0) ++j;
        ExactScalar m = ExactScalar(rinv(i, j));
        ExactScalar a = m * omega.corner()[j];
        ExactScalar b = m * (omega.corner()[j] + omega.edges()[j]);
        corner[i] = m.sign() > 0 ? a : b;
        edges[i] = (b - a).abs();
    }

    std::vector<ExactVec> translates;
    translates.reserve(omega.translates().size() * sys.B.size());
    for (const auto& t : omega.translates())
        for (const auto& b : sys.B) {
            ExactVec shifted(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i) shifted[i] = t[i] + ExactScalar(b[i]);
            ExactVec image = rinv.apply(shifted);
            // Express relative to the new base corner: translate = image of the
            // old (corner-anchored) shift; base corner is shared by all copies.
            translates.push_back(std::move(image));
        }
    return Domain(corner, edges, std::move(translates));
}

std::vector<ExactVec> apply_affine_dual(const AffineSystem& sys,
                                        const std::vector<ExactVec>& points) {
    if (sys.L.empty())
        throw ArgumentError("geometry.empty-translates", "spectrum-side translate set is empty");
    RationalMatrix rt = sys.R.transpose();
    std::vector<ExactVec> out;
    out.reserve(points.size() * sys.L.size());
    for (const auto& s : points)
        for (const auto& l : sys.L) {
            ExactVec shifted(s.size());
            for (size_t i = 0; i < s.size(); ++i) shifted[i] = s[i] + ExactScalar(l[i]);
            out.push_back(rt.apply(shifted));
        }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --- SpectrumSpec ------------------------------------------------------------------

int SpectrumSpec::dim() const {
    if (const auto* f = finite()) return f->points.empty() ? 0 : static_cast<int>(f->points[0].size());
    if (const auto* l = lattice())
        return l->generators.empty()
                   ? (l->offsets.empty() ? 0 : static_cast<int>(l->offsets[0].size()))
                   : static_cast<int>(l->generators[0].size());
    return ifs()->system.R.rows();
}

bool SpectrumSpec::all_rational() const {
    if (const auto* f = finite()) {
        for (const auto& p : f->points)
            if (!af::all_rational(p)) return false;
        return true;
    }
    if (const auto* l = lattice()) {
        for (const auto& g : l->generators)
            if (!af::all_rational(g)) return false;
        for (const auto& o : l->offsets)
            if (!af::all_rational(o)) return false;
        return true;
    }
    for (const auto& s : ifs()->seed)
        if (!af::all_rational(s)) return false;
    return true;  // the maps themselves are rational
}

namespace {

bool within_radius(const ExactVec& p, const ExactScalar& radius) {
    for (const auto& x : p)
        if ((radius - x.abs()).sign() < 0) return false;
    return true;
}

std::vector<ExactVec> sorted_unique(std::vector<ExactVec> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Integer range n with |off + n*g| <= radius, g != 0; exact.
std::pair<Integer, Integer> axis_range(const ExactScalar& off, const ExactScalar& g,
                                       const ExactScalar& radius) {
    ExactScalar lo = (-radius - off) / g;
    ExactScalar hi = (radius - off) / g;
    if (g.sign() < 0) std::swap(lo, hi);
    Integer nlo = -((-lo).floor());  // ceil
    Integer nhi = hi.floor();
    return {nlo, nhi};
}

std::vector<ExactVec> enumerate_lattice(const LatticeCosets& lat, const ExactScalar& radius) {
    size_t d = lat.generators.empty() ? lat.offsets.at(0).size() : lat.generators[0].size();
    std::vector<ExactVec> offsets = lat.offsets;
    if (offsets.empty()) offsets.emplace_back(d, ExactScalar(0));

    // Axis-aligned generators: one nonzero coordinate each, distinct axes.
    std::vector<int> axis_of(lat.generators.size(), -1);
    bool aligned = true;
    std::vector<bool> used(d, false);
    for (size_t k = 0; k < lat.generators.size() && aligned; ++k) {
        int nz = -1;
        for (size_t i = 0; i < d; ++i)
            if (!lat.generators[k][i].is_zero()) {
                if (nz >= 0) {
                    aligned = false;
                    break;
                }
                nz = static_cast<int>(i);
            }
        if (nz < 0 || (aligned && used[static_cast<size_t>(nz)])) aligned = false;
        if (aligned) {
            axis_of[k] = nz;
            used[static_cast<size_t>(nz)] = true;
        }
    }

    std::vector<ExactVec> out;
    if (aligned) {
        for (const auto& off : offsets) {
            // Offset coordinates on axes without a generator must fit the ball.
            bool feasible = true;
            for (size_t i = 0; i < d && feasible; ++i)
                if (!used[i] && (radius - off[i].abs()).sign() < 0) feasible = false;
            if (!feasible) continue;

            std::vector<std::pair<Integer, Integer>> ranges;
            for (size_t k = 0; k < lat.generators.size(); ++k) {
                int ax = axis_of[k];
                ranges.push_back(
                    axis_range(off[static_cast<size_t>(ax)],
                               lat.generators[k][static_cast<size_t>(ax)], radius));
                if (ranges.back().first > ranges.back().second) {
                    feasible = false;
                    break;
                }
            }
            if (!feasible) continue;

            std::vector<Integer> n(lat.generators.size());
            for (size_t k = 0; k < n.size(); ++k) n[k] = ranges[k].first;
            while (true) {
                ExactVec p = off;
                for (size_t k = 0; k < n.size(); ++k) {
                    size_t ax = static_cast<size_t>(axis_of[k]);
                    p[ax] = p[ax] + ExactScalar(Rational(n[k])) * lat.generators[k][ax];
                }
                out.push_back(std::move(p));
                size_t k = 0;
                for (; k < n.size(); ++k) {
                    if (n[k] < ranges[k].second) {
                        ++n[k];
                        break;
                    }
                    n[k] = ranges[k].first;
                }
                if (k == n.size()) break;
            }
        }
        return sorted_unique(std::move(out));
    }

    // General rational generators: bound the integer box through the inverse,
    // then filter exactly.
    if (lat.generators.size() != d)
        throw ArgumentError("geometry.lattice-shape",
                            "non-axis-aligned lattices need a full set of generators");
    RationalMatrix g(static_cast<int>(d), static_cast<int>(d));
    for (size_t k = 0; k < d; ++k)
        for (size_t i = 0; i < d; ++i)
            g(static_cast<int>(i), static_cast<int>(k)) = lat.generators[k][i].as_rational();
    RationalMatrix ginv = g.inverse();
    double norm = 0;
    for (int i = 0; i < ginv.rows(); ++i) {
        double row = 0;
        for (int j = 0; j < ginv.cols(); ++j) row += std::abs(af::to_double(ginv(i, j)));
        norm = std::max(norm, row);
    }
    for (const auto& off : offsets) {
        double off_norm = 0;
        for (const auto& x : off) off_norm = std::max(off_norm, std::abs(x.to_double()));
        auto bound = static_cast<long long>(norm * (radius.to_double() + off_norm)) + 2;
        std::vector<long long> n(d, -bound);
        while (true) {
            ExactVec p = off;
            for (size_t k = 0; k < d; ++k)
                for (size_t i = 0; i < d; ++i)
                    p[i] = p[i] + ExactScalar(Rational(n[k])) * lat.generators[k][i];
            if (within_radius(p, radius)) out.push_back(std::move(p));
            size_t k = 0;
            for (; k < d; ++k) {
                if (n[k] < bound) {
                    ++n[k];
                    break;
                }
                n[k] = -bound;
            }
            if (k == d) break;
        }
    }
    return sorted_unique(std::move(out));
}

}  // namespace

std::vector<ExactVec> SpectrumSpec::enumerate(const ExactScalar& radius) const {
    if (radius.sign() < 0)
        throw ArgumentError("geometry.negative-radius", "truncation radius must be nonnegative");
    if (const auto* f = finite()) {
        std::vector<ExactVec> out;
        for (const auto& p : f->points)
            if (within_radius(p, radius)) out.push_back(p);
        return sorted_unique(std::move(out));
    }
    if (const auto* l = lattice()) return enumerate_lattice(*l, radius);

    const auto& gen = *ifs();
    std::vector<ExactVec> pts = gen.seed;
    if (pts.empty()) pts.emplace_back(static_cast<size_t>(gen.system.R.rows()), ExactScalar(0));
    for (int k = 0; k < gen.depth; ++k) pts = apply_affine_dual(gen.system, pts);
    std::vector<ExactVec> out;
    for (auto& p : pts)
        if (within_radius(p, radius)) out.push_back(std::move(p));
    return sorted_unique(std::move(out));
}

// --- annihilators --------------------------------------------------------------

namespace {

// Spectrum elements whose integrality/rationality decides the whole set: all
// points for finite spectra, generators and offsets for lattices, the full
// depth-truncated orbit for IFS spectra.
std::vector<ExactVec> annihilator_test_set(const SpectrumSpec& spectrum) {
    if (const auto* f = spectrum.finite()) return f->points;
    if (const auto* l = spectrum.lattice()) {
        std::vector<ExactVec> out = l->generators;
        out.insert(out.end(), l->offsets.begin(), l->offsets.end());
        if (out.empty())
            throw ArgumentError("geometry.lattice-shape", "empty lattice spectrum");
        return out;
    }
    const auto& gen = *spectrum.ifs();
    std::vector<ExactVec> pts = gen.seed;
    if (pts.empty()) pts.emplace_back(static_cast<size_t>(gen.system.R.rows()), ExactScalar(0));
    for (int k = 0; k < gen.depth; ++k) pts = apply_affine_dual(gen.system, pts);
    return pts;
}

}  // namespace

AnnihilatorResult annihilator_contains(const ExactVec& t, const SpectrumSpec& spectrum) {
    if (!af::all_rational(t) || !spectrum.all_rational())
        throw ExactnessError("geometry.irrational-annihilator",
                             "integrality test needs rational data; use the "
                             "rational-annihilator predicate for radical inputs");
    for (const auto& w : annihilator_test_set(spectrum)) {
        if (!dot(t, w).is_integer()) return {false, w};
    }
    return {true, std::nullopt};
}

AnnihilatorResult rational_annihilator_contains(const ExactVec& t, const SpectrumSpec& spectrum) {
    for (const auto& w : annihilator_test_set(spectrum)) {
        if (!dot(t, w).is_rational()) return {false, w};
    }
    return {true, std::nullopt};
}

}  // namespace af
