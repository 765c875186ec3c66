#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "af/scalar.hpp"

namespace af {

using ExactVec = std::vector<ExactScalar>;
using RationalVec = std::vector<Rational>;

ExactVec to_exact(const RationalVec& v);
bool all_rational(const ExactVec& v);
RationalVec as_rational(const ExactVec& v);  // ExactnessError on irrational entry
ExactScalar dot(const ExactVec& a, const ExactVec& b);
bool lex_less(const ExactVec& a, const ExactVec& b);
Eigen::VectorXd to_double(const ExactVec& v);

// --- small exact matrices ----------------------------------------------------
//
// Eigen's expression machinery does not instantiate over big rationals, and the
// matrices here are at most a few by a few, so exact work is done on a plain
// row-major store with Gauss-Jordan elimination.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols);
    static RationalMatrix identity(int d);
    static RationalMatrix diagonal(const RationalVec& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const {
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

    RationalMatrix transpose() const;
    Rational determinant() const;            // exact
    RationalMatrix inverse() const;          // exact; throws when singular
    RationalVec apply(const RationalVec& v) const;
    ExactVec apply(const ExactVec& v) const;
    Eigen::MatrixXd to_double() const;

    // Exactly one nonzero entry in every row and every column (signed scaled
    // permutation); such maps carry axis-aligned boxes to axis-aligned boxes.
    bool is_scaled_permutation() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

private:
    int rows_, cols_;
    std::vector<Rational> a_;
};

// --- domains -------------------------------------------------------------------
//
// A domain is a finite union of translated copies of one axis-aligned box:
//   Omega = union over t in translates of  (t + corner + [0, edges]).
// Coordinates are exact scalars so membership and overlap are decidable.
class Domain {
public:
    Domain() : dim_(0) {}
    Domain(ExactVec corner, ExactVec edges, std::vector<ExactVec> translates);
    // Single box [corner, corner + edges].
    static Domain box(ExactVec corner, ExactVec edges);
    static Domain unit_interval();  // [0, 1]

    int dim() const { return dim_; }
    const ExactVec& corner() const { return corner_; }
    const ExactVec& edges() const { return edges_; }
    const std::vector<ExactVec>& translates() const { return translates_; }

    // (#translates) * prod(edges); meaningful when copies do not overlap.
    ExactScalar volume() const;
    bool contains(const ExactVec& x) const;  // closed boxes, exact
    // Union of the translate sets of two domains sharing box shape.
    static Domain merged(const Domain& a, const Domain& b);
    // Domain translated by a vector (adds it to every translate).
    Domain translated(const ExactVec& shift) const;

private:
    int dim_;
    ExactVec corner_, edges_;
    std::vector<ExactVec> translates_;
};

enum class OverlapClass { Disjoint, NullOverlap, Overlap };

// Classification of { omega + t : t in new_translates }: positive-volume
// intersection between two distinct copies -> Overlap; touching boundaries
// only -> NullOverlap; otherwise Disjoint.  Exact.
OverlapClass check_no_overlap(const Domain& omega, const std::vector<ExactVec>& new_translates);

// Classification of the copies inside one domain (its own translate set).
OverlapClass check_no_overlap(const Domain& omega);

// --- affine systems -----------------------------------------------------------

struct AffineSystem {
    RationalMatrix R;            // expansive matrix
    std::vector<RationalVec> B;  // domain-side translates
    std::vector<RationalVec> L;  // spectrum-side translates (may be empty)
};

// Spectral radius of R^{-1} below 1 - 1e-9 -> true; at least 1 -> false;
// inside [1 - 1e-9, 1) -> IndeterminateError (decision at working precision).
bool is_expansive(const RationalMatrix& R);

// One application of the domain-side map: Omega -> union_b R^{-1}(Omega + b).
// Requires R to be a scaled permutation so boxes stay axis-aligned.
Domain apply_affine(const AffineSystem& sys, const Domain& omega);

// One application of the spectrum-side map: s -> R^T (s + l) over l in L.
std::vector<ExactVec> apply_affine_dual(const AffineSystem& sys,
                                        const std::vector<ExactVec>& points);

// --- spectra -------------------------------------------------------------------

struct FiniteSet {
    std::vector<ExactVec> points;
};

// { offset + n1 g1 + ... + nd gd : n integer }, one copy per offset.
struct LatticeCosets {
    std::vector<ExactVec> generators;
    std::vector<ExactVec> offsets;  // empty means just the origin offset
};

// Points produced by iterating the spectrum-side map `depth` times from the
// seed set (default {0}).
struct IfsGenerated {
    AffineSystem system;
    int depth = 0;
    std::vector<ExactVec> seed;  // empty means { origin }
};

class SpectrumSpec {
public:
    SpectrumSpec() = default;
    SpectrumSpec(FiniteSet s) : v_(std::move(s)) {}
    SpectrumSpec(LatticeCosets s) : v_(std::move(s)) {}
    SpectrumSpec(IfsGenerated s) : v_(std::move(s)) {}

    int dim() const;
    bool is_lattice() const { return std::holds_alternative<LatticeCosets>(v_); }
    const LatticeCosets* lattice() const { return std::get_if<LatticeCosets>(&v_); }
    const FiniteSet* finite() const { return std::get_if<FiniteSet>(&v_); }
    const IfsGenerated* ifs() const { return std::get_if<IfsGenerated>(&v_); }

    // All spectrum points with sup-norm at most radius, sorted lexicographically,
    // exact and deduplicated.  Deterministic for fixed inputs.
    std::vector<ExactVec> enumerate(const ExactScalar& radius) const;
    bool all_rational() const;

private:
    std::variant<FiniteSet, LatticeCosets, IfsGenerated> v_;
};

// --- annihilators ---------------------------------------------------------------

struct AnnihilatorResult {
    bool contains = false;
    std::optional<ExactVec> witness;  // a spectrum element with t . w not integral
};

// Whether t . lambda is an integer for every lambda in the spectrum.  Exact;
// irrational data anywhere raises ExactnessError (integrality of a general
// irrational product is outside this predicate's contract).
AnnihilatorResult annihilator_contains(const ExactVec& t, const SpectrumSpec& spectrum);

// Whether t . lambda is rational for every lambda.  Decides exactly even for
// quadratic-irrational data (a rational times an irrational is irrational, and
// products of radicals resolve within the field).
AnnihilatorResult rational_annihilator_contains(const ExactVec& t,
                                                const SpectrumSpec& spectrum);

}  // namespace af
