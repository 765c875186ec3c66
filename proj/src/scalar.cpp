#include "af/scalar.hpp"

#include <cmath>
#include <cstdlib>

namespace af {

Integer rational_floor(const Rational& q) {
    Integer n = numerator(q);
    Integer d = denominator(q);  // always > 0
    Integer quo = n / d;
    if (n < 0 && quo * d != n) --quo;
    return quo;
}

Rational rational_frac(const Rational& q) { return q - Rational(rational_floor(q)); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ArgumentError("argument.rational-parse", "empty rational literal");

    auto dot = s.find('.');
    try {
        if (dot == std::string::npos) return Rational(s);  // "n" or "n/d"
        if (s.find('/') != std::string::npos)
            throw ArgumentError("argument.rational-parse",
                                "rational literal mixes '.' and '/': " + text);
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        if (digits.empty() || digits == "-" || digits == "+")
            throw ArgumentError("argument.rational-parse", "bad rational literal: " + text);
        // strip leading zeros (cpp_int would read "025" as octal)
        std::string sign;
        if (digits[0] == '-' || digits[0] == '+') {
            if (digits[0] == '-') sign = "-";
            digits.erase(0, 1);
        }
        size_t nz = digits.find_first_not_of('0');
        digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
        Integer den = 1;
        for (size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        return Rational(Integer(sign + digits), den);
    } catch (const ArgumentError&) {
        throw;
    } catch (const std::exception&) {
        throw ArgumentError("argument.rational-parse", "bad rational literal: " + text);
    }
}

std::string rational_to_string(const Rational& q) { return q.str(); }

std::pair<Integer, Integer> extract_square(const Integer& n) {
    if (n <= 0)
        throw NumericDomainError("scalar.square-extract-nonpositive",
                                 "square extraction needs a positive integer");
    Integer rest = n, s = 1, m = 1;
    for (Integer p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) m *= p;
    }
    m *= rest;  // leftover prime (or 1)
    return {s, m};
}

// --- ExactScalar -------------------------------------------------------------

void ExactScalar::normalize() {
    if (c_ == 0) {
        rad_ = 1;
        return;
    }
    if (rad_ <= 0)
        throw NumericDomainError("scalar.negative-radicand",
                                 "radicand of a real quadratic scalar must be positive");
    auto [s, m] = extract_square(rad_);
    if (s != 1) {
        c_ *= Rational(s);
        rad_ = m;
    }
    if (rad_ == 1) {
        q_ += c_;
        c_ = 0;
    }
}

ExactScalar ExactScalar::make(Rational q, Rational c, Integer rad) {
    ExactScalar x;
    x.q_ = std::move(q);
    x.c_ = std::move(c);
    x.rad_ = std::move(rad);
    x.normalize();
    return x;
}

ExactScalar ExactScalar::sqrt_of(const Rational& r) {
    if (r < 0)
        throw NumericDomainError("scalar.sqrt-of-negative",
                                 "square root of a negative rational");
    if (r == 0) return ExactScalar(0);
    // sqrt(p/q) = sqrt(p*q) / q
    Integer p = numerator(r), q = denominator(r);
    return make(Rational(0), Rational(1, q), p * q);
}

bool ExactScalar::is_integer() const { return c_ == 0 && denominator(q_) == 1; }

Rational ExactScalar::as_rational() const {
    if (c_ != 0)
        throw ExactnessError("scalar.irrational",
                             "value " + to_string() + " is irrational");
    return q_;
}

double ExactScalar::to_double() const {
    double v = af::to_double(q_);
    if (c_ != 0) v += af::to_double(c_) * std::sqrt(rad_.convert_to<double>());
    return v;
}

int ExactScalar::sign() const {
    int sq = q_.sign(), sc = c_.sign();
    if (sc == 0) return sq;
    if (sq == 0) return sc;
    if (sq == sc) return sq;
    // Opposite signs: compare |q| against |c|*sqrt(rad) exactly.
    Rational diff = q_ * q_ - c_ * c_ * Rational(rad_);
    int sd = diff.sign();
    if (sd == 0) return 0;  // can't actually happen with rad_ squarefree > 1
    return sd > 0 ? sq : sc;
}

Integer ExactScalar::floor() const {
    if (c_ == 0) return rational_floor(q_);
    double approx = to_double();
    if (std::abs(approx) > 9e15)
        throw ExactnessError("scalar.floor-overflow",
                             "floor of quadratic scalar out of supported range");
    auto n0 = static_cast<long long>(std::floor(approx));
    for (long long n = n0 - 2; n <= n0 + 2; ++n) {
        ExactScalar lo = *this - ExactScalar(Integer(n));
        ExactScalar hi = *this - ExactScalar(Integer(n + 1));
        if (lo.sign() >= 0 && hi.sign() < 0) return Integer(n);
    }
    throw NumericDomainError("scalar.floor-bracket", "floor bracketing failed");
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar x = *this;
    x.q_ = -x.q_;
    x.c_ = -x.c_;
    return x;
}

ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
    if (a.c_ == 0) return ExactScalar::make(a.q_ + b.q_, b.c_, b.rad_);
    if (b.c_ == 0) return ExactScalar::make(a.q_ + b.q_, a.c_, a.rad_);
    if (a.rad_ != b.rad_)
        throw ExactnessError("scalar.mixed-radicands",
                             "sum of radicals over different fields: " + a.to_string() +
                                 " + " + b.to_string());
    return ExactScalar::make(a.q_ + b.q_, a.c_ + b.c_, a.rad_);
}

ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) { return a + (-b); }

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    if (a.c_ == 0)
        return ExactScalar::make(a.q_ * b.q_, a.q_ * b.c_, b.rad_);
    if (b.c_ == 0)
        return ExactScalar::make(a.q_ * b.q_, b.q_ * a.c_, a.rad_);
    if (a.rad_ == b.rad_)
        return ExactScalar::make(a.q_ * b.q_ + a.c_ * b.c_ * Rational(a.rad_),
                                 a.q_ * b.c_ + b.q_ * a.c_, a.rad_);
    if (a.q_ == 0 && b.q_ == 0)  // pure radicals combine: sqrt(r1)*sqrt(r2)
        return ExactScalar::make(Rational(0), a.c_ * b.c_, a.rad_ * b.rad_);
    throw ExactnessError("scalar.mixed-radicands",
                         "product leaves the quadratic field: " + a.to_string() + " * " +
                             b.to_string());
}

ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
    if (b.is_zero())
        throw NumericDomainError("scalar.divide-by-zero", "division by zero scalar");
    if (b.c_ == 0) return ExactScalar::make(a.q_ / b.q_, a.c_ / b.q_, a.rad_);
    // 1/(q + c sqrt(r)) = (q - c sqrt(r)) / (q^2 - c^2 r)
    Rational norm = b.q_ * b.q_ - b.c_ * b.c_ * Rational(b.rad_);
    ExactScalar conj = ExactScalar::make(b.q_ / norm, -b.c_ / norm, b.rad_);
    return a * conj;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.q_ == b.q_ && a.c_ == b.c_ && a.rad_ == b.rad_;
}

std::string ExactScalar::to_string() const {
    if (c_ == 0) return rational_to_string(q_);
    std::string s;
    if (q_ != 0) s += rational_to_string(q_) + (c_ > 0 ? "+" : "");
    if (c_ == 1) {
    } else if (c_ == -1) {
        s += "-";
    } else {
        s += rational_to_string(c_) + "*";
    }
    s += "sqrt(" + rad_.str() + ")";
    return s;
}

}  // namespace af
