#pragma once

// Exact symbolic differentiation machinery for the Taylor coefficients of the
// bond-price factors at t = T, over an arbitrary coefficient field (Rational
// for exact runs, double for generic parameters).
//
// Route 2 ("A-engine"): the PDE gives
//   A_t = c(y,B) A - (alpha(y) - lambda_tilde y) A_y - (omega^2/2) y A_yy,
//   c(y,B) = B (kappa theta - lambda y) - (y/2) B^2,   dB/dt = kappa B - 1.
// Repeated t-differentiation stays inside sums q_m(y,B) d^m A/dy^m, which at
// t = T collapse to q_0(y, 0) because A(T,.) = 1.
//
// Route 1 ("a-engine"): a' = (K - Omega_bar^2 B / 2) a B closes over
// polynomials in (a, B), evaluated at a = 1, B = 0.

#include <array>
#include <vector>

#include "tsq/errors.hpp"
#include "tsq/polynomial.hpp"

namespace tsq {

template <typename Scalar>
struct SymbolicModel {
    Scalar kappa{};
    Scalar theta{};
    Scalar lambda{};
    Scalar lambda_tilde{};
    Scalar omega_sq{};
    Polynomial<Scalar> alpha;  // drift, polynomial in y
};

namespace detail {

// polynomial in B whose coefficients are polynomials in y
template <typename Scalar>
using YB = Polynomial<Polynomial<Scalar>>;

template <typename Scalar>
YB<Scalar> yb_const(Polynomial<Scalar> in_y) {
    return YB<Scalar>({std::move(in_y)});
}

// d/dy applied to every B-coefficient
template <typename Scalar>
YB<Scalar> d_dy(const YB<Scalar>& q) {
    std::vector<Polynomial<Scalar>> c(q.coeffs());
    for (auto& p : c) p = p.derivative();
    return YB<Scalar>(std::move(c));
}

inline long long binomial(int n, int k) {
    long long v = 1;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

}  // namespace detail

// d^k A / dt^k (T, y) for k = 0..order as exact polynomials in y.
template <typename Scalar>
std::vector<Polynomial<Scalar>> taylor_A_polynomials(const SymbolicModel<Scalar>& m, int order) {
    using P = Polynomial<Scalar>;
    using Q = detail::YB<Scalar>;
    if (order < 0 || order > 4) throw InvalidInput("taylor_A_polynomials: order must be 0..4");

    const Scalar half = Scalar(1) / Scalar(2);

    // A_t = sum_j g_j d^j A/dy^j
    std::array<Q, 3> g;
    {
        // g0 = c(y,B): B-coeff 1 is (kappa theta - lambda y), B-coeff 2 is -y/2
        std::vector<P> c0(3);
        c0[0] = P();
        c0[1] = P({m.kappa * m.theta, -m.lambda});
        c0[2] = P({Scalar(0), -half});
        g[0] = Q(std::move(c0));
        g[1] = detail::yb_const<Scalar>(-(m.alpha - P({Scalar(0), m.lambda_tilde})));
        g[2] = detail::yb_const<Scalar>(P({Scalar(0), -(m.omega_sq * half)}));
    }
    // dB/dt = kappa B - 1
    const Q b_dot = Q({P::constant(Scalar(-1)), P::constant(m.kappa)});

    // state[m] multiplies d^m A/dy^m
    std::vector<Q> state(1, detail::yb_const<Scalar>(P::constant(Scalar(1))));

    std::vector<P> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    out.push_back(P::constant(Scalar(1)));  // A(T,y) = 1

    for (int k = 1; k <= order; ++k) {
        std::vector<Q> next(state.size() + 2);
        for (std::size_t mi = 0; mi < state.size(); ++mi) {
            const Q& q = state[mi];
            if (q.is_zero()) continue;
            // t-derivative of the coefficient through B(t)
            next[mi] += q.derivative() * b_dot;
            // q * d^m/dy^m (A_t), Leibniz over each g_j
            for (int j = 0; j < 3; ++j) {
                Q gd = g[static_cast<std::size_t>(j)];
                for (std::size_t l = 0; l <= mi; ++l) {
                    if (gd.is_zero()) break;
                    const std::size_t target = mi - l + static_cast<std::size_t>(j);
                    if (target >= next.size()) next.resize(target + 1);
                    const Scalar c = Scalar(static_cast<std::int64_t>(
                        detail::binomial(static_cast<int>(mi), static_cast<int>(l))));
                    next[target] += detail::yb_const<Scalar>(P::constant(c)) * gd * q;
                    gd = detail::d_dy(gd);
                }
            }
        }
        while (next.size() > 1 && next.back().is_zero()) next.pop_back();
        state = std::move(next);
        // evaluate at t = T: B = 0 and d^m A/dy^m = 0 for m >= 1
        out.push_back(state[0].coeff(0));
    }
    return out;
}

// a^(k)(T) for k = 0..order from a' = (K - Omega_bar^2 B/2) a B.
template <typename Scalar>
std::vector<Scalar> taylor_a_ode(Scalar K, Scalar omega_bar_sq, Scalar kappa, int order) {
    using P = Polynomial<Scalar>;   // in B
    using Q = Polynomial<P>;        // outer a, inner B
    if (order < 0 || order > 6) throw InvalidInput("taylor_a_ode: order must be 0..6");

    const Scalar half = Scalar(1) / Scalar(2);
    const P v({Scalar(0), K, -(omega_bar_sq * half)});  // K B - Omega^2 B^2 / 2
    const P b_dot({Scalar(-1), kappa});                 // kappa B - 1

    Q p = Q({P(), P::constant(Scalar(1))});  // the monomial a
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    auto eval_a1_b0 = [](const Q& q) {
        Scalar acc = Scalar(0);
        for (const auto& pb : q.coeffs()) acc += pb.coeff(0);
        return acc;
    };
    out.push_back(eval_a1_b0(p));
    for (int k = 1; k <= order; ++k) {
        // dP/dt = (dP/da) a v(B) + (dP/dB)(kappa B - 1)
        const auto& cs = p.coeffs();
        std::vector<P> da_av(cs.size(), P());
        std::vector<P> db(cs.size(), P());
        for (std::size_t mi = 1; mi < cs.size(); ++mi)
            da_av[mi] = cs[mi] * v * P::constant(Scalar(static_cast<std::int64_t>(mi)));
        for (std::size_t mi = 0; mi < cs.size(); ++mi) db[mi] = cs[mi].derivative() * b_dot;
        Q next = Q(std::move(da_av)) + Q(std::move(db));
        p = std::move(next);
        out.push_back(eval_a1_b0(p));
    }
    return out;
}

// Exact Gamma moments of the stationary density for a linear drift
// kappa_y (theta_y - y): shape = 2 kappa_y theta_y / omega^2,
// rate = 2 kappa_y / omega^2, <y^k> = prod_j (shape + j) / rate.
template <typename Scalar>
std::vector<Scalar> gamma_moments_linear(Scalar kappa_y, Scalar theta_y, Scalar omega_sq,
                                         int max_k) {
    const Scalar shape = Scalar(2) * kappa_y * theta_y / omega_sq;
    const Scalar rate = Scalar(2) * kappa_y / omega_sq;
    std::vector<Scalar> m(static_cast<std::size_t>(max_k) + 1);
    m[0] = Scalar(1);
    for (int k = 1; k <= max_k; ++k)
        m[static_cast<std::size_t>(k)] =
            m[static_cast<std::size_t>(k - 1)] * (shape + Scalar(k - 1)) / rate;
    return m;
}

}  // namespace tsq
