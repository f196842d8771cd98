#pragma once

// Exact rational arithmetic for the symbolic Taylor recurrences. Deliberately
// small: int64 numerator/denominator with __int128 intermediates, throwing on
// overflow instead of silently losing exactness.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tsq {

class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return make(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    bool is_zero() const { return num_ == 0; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Recovers the rational a double was parsed from (continued fractions,
    // denominators up to max_den). Exact for ordinary decimal literals.
    static Rational from_double(double x, std::int64_t max_den = 1'000'000'000'000LL) {
        if (!std::isfinite(x)) throw std::domain_error("Rational::from_double: non-finite");
        bool neg = x < 0;
        double v = std::fabs(x);
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double frac = v;
        for (int it = 0; it < 64; ++it) {
            double fl = std::floor(frac);
            if (fl > 9.2e18) throw std::overflow_error("Rational::from_double: magnitude");
            auto a = static_cast<std::int64_t>(fl);
            std::int64_t p2 = a * p1 + p0;
            std::int64_t q2 = a * q1 + q0;
            if (q2 > max_den) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            double approx = static_cast<double>(p1) / static_cast<double>(q1);
            if (std::fabs(approx - v) <= 1e-15 * std::max(1.0, v)) break;
            double rem = frac - fl;
            if (rem < 1e-18) break;
            frac = 1.0 / rem;
        }
        Rational r(neg ? -p1 : p1, q1);
        if (std::fabs(r.to_double() - x) > 1e-12 * std::max(1.0, std::fabs(x)))
            throw std::domain_error("Rational::from_double: no exact small rational");
        return r;
    }

  private:
    static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
        if (n > lim || n < -lim || d > lim)
            throw std::overflow_error("Rational: overflow after reduction");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    void normalize() { *this = make(num_, den_); }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace tsq
