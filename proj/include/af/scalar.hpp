#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "af/errors.hpp"

namespace af {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// --- exact rational helpers ------------------------------------------------

Integer rational_floor(const Rational& q);
// q - floor(q), always in [0, 1).
Rational rational_frac(const Rational& q);
double to_double(const Rational& q);

// Accepts "n", "n/d", and plain decimals like "0.25".  Reduced form with a
// positive denominator is guaranteed by the representation itself.
Rational parse_rational(const std::string& text);
std::string rational_to_string(const Rational& q);

// n = s^2 * m with m squarefree; requires n > 0.
std::pair<Integer, Integer> extract_square(const Integer& n);

// --- quadratic-field scalars -----------------------------------------------

// Value q + c*sqrt(rad) with q, c rational and rad a squarefree integer > 1
// (rad == 1 and c == 0 for plain rationals).  All arithmetic and comparisons
// are exact; operations whose result would leave every representable field
// Q(sqrt(rad)) raise ExactnessError instead of approximating.
class ExactScalar {
public:
    ExactScalar() : q_(0), c_(0), rad_(1) {}
    ExactScalar(int v) : q_(v), c_(0), rad_(1) {}
    ExactScalar(Integer v) : q_(std::move(v)), c_(0), rad_(1) {}
    ExactScalar(Rational v) : q_(std::move(v)), c_(0), rad_(1) {}

    // sqrt of a nonnegative rational, normalized so the radicand is squarefree.
    static ExactScalar sqrt_of(const Rational& r);
    // Raw constructor; normalizes (square extraction, zero coefficient).
    static ExactScalar make(Rational q, Rational c, Integer rad);

    bool is_rational() const { return c_ == 0; }
    bool is_integer() const;
    bool is_zero() const { return c_ == 0 && q_ == 0; }
    Rational as_rational() const;  // ExactnessError when irrational

    const Rational& rational_part() const { return q_; }
    const Rational& radical_coeff() const { return c_; }
    const Integer& radicand() const { return rad_; }

    double to_double() const;
    int sign() const;        // exact; -1, 0, or +1
    Integer floor() const;   // exact
    ExactScalar frac() const { return *this - ExactScalar(Integer(floor())); }
    ExactScalar abs() const { return sign() < 0 ? -*this : *this; }

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b);

    friend bool operator==(const ExactScalar& a, const ExactScalar& b);
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
    friend bool operator<(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() < 0; }
    friend bool operator>(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const ExactScalar& a, const ExactScalar& b) { return (a - b).sign() >= 0; }

    std::string to_string() const;

private:
    void normalize();

    Rational q_;   // rational part
    Rational c_;   // coefficient of the radical
    Integer rad_;  // squarefree radicand, 1 iff the value is rational
};

}  // namespace af
