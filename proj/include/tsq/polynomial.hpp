#pragma once

// Dense univariate polynomials over an arbitrary coefficient ring. Used with
// double for numeric work and with Rational (possibly nested, giving bivariate
// polynomials) for the exact Taylor recurrences.

#include <cstddef>
#include <string>
#include <vector>

namespace tsq {

template <typename T>
class Polynomial {
  public:
    Polynomial() = default;
    // constant polynomial from an integer, so Polynomial itself satisfies the
    // ring-scalar interface and can nest
    explicit Polynomial(int v) {
        if (v != 0) c_.push_back(T(v));
    }
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial constant(T v) { return Polynomial(std::vector<T>{std::move(v)}); }
    // x^k
    static Polynomial monomial(std::size_t k, T v = T(1)) {
        std::vector<T> c(k + 1, T(0));
        c[k] = std::move(v);
        return Polynomial(std::move(c));
    }

    const std::vector<T>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial reported as -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

    template <typename X>
    auto operator()(const X& x) const {
        using R = decltype(T(0) * x);
        R acc = R(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + R(c_[i]);
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<T> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<int>(i));
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] - b.c_[i];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const T& s, const Polynomial& p) {
        std::vector<T> c(p.c_);
        for (auto& v : c) v = v * s;
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(const Polynomial& p, const T& s) { return s * p; }
    Polynomial operator-() const { return T(-1) * *this; }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  private:
    static bool coeff_is_zero(const T& v) { return v == T(0); }

    void trim() {
        while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
    }

    std::vector<T> c_;  // ascending powers
};

}  // namespace tsq
