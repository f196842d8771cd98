#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature with interval subdivision.
// The final subdivision can be exported so downstream consumers (density
// moments, volatility averaging) can reuse a proven panelization with a
// fixed-node rule.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "tsq/errors.hpp"

namespace tsq {

namespace detail {

// QUADPACK dqk15 abscissae/weights, positive half, 25 digits.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

}  // namespace detail

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // conservative absolute error estimate
    int intervals = 0;
};

// One K15 application on [a,b]; error from the Gauss/Kronrod discrepancy.
template <typename F>
QuadResult gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double x = detail::kKronrodNodes[i];
        if (i == 7) {
            const double fc = f(c);
            kron += detail::kKronrodWeights[7] * fc;
            gauss += detail::kGaussWeights[3] * fc;
            break;
        }
        const double f1 = f(c - h * x);
        const double f2 = f(c + h * x);
        kron += detail::kKronrodWeights[i] * (f1 + f2);
        if (i % 2 == 1) gauss += detail::kGaussWeights[i / 2] * (f1 + f2);
    }
    QuadResult r;
    r.value = kron * h;
    const double diff = std::fabs((kron - gauss) * h);
    // QUADPACK-style sharpening of the raw discrepancy.
    r.error = diff > 0.0 ? std::min(diff, 200.0 * diff * std::sqrt(diff)) : 0.0;
    if (!(r.error > 0.0)) r.error = diff;
    r.intervals = 1;
    return r;
}

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

// Adaptive subdivision: always split the interval with the largest error
// estimate. Optionally records the final panel edges.
template <typename F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadOptions& opt = {},
                              std::vector<double>* panel_edges = nullptr) {
    struct Interval {
        double a, b, value, error;
    };
    std::vector<Interval> ivals;
    auto push = [&](double lo, double hi) {
        QuadResult q = gauss_kronrod_15(f, lo, hi);
        ivals.push_back({lo, hi, q.value, q.error});
    };
    push(a, b);
    double total = ivals[0].value, err = ivals[0].error;
    while (true) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
        // a single panel is never trusted unless its estimate is exactly zero
        if (err <= target && (ivals.size() > 1 || err == 0.0)) break;
        if (static_cast<int>(ivals.size()) >= opt.max_intervals)
            throw QuadratureNonConvergence("adaptive quadrature: interval budget exhausted");
        auto worst = std::max_element(ivals.begin(), ivals.end(),
                                      [](const Interval& x, const Interval& y) { return x.error < y.error; });
        Interval w = *worst;
        ivals.erase(worst);
        const double mid = 0.5 * (w.a + w.b);
        if (!(mid > w.a && mid < w.b))
            throw QuadratureNonConvergence("adaptive quadrature: interval underflow");
        push(w.a, mid);
        push(mid, w.b);
        total = 0.0;
        err = 0.0;
        for (const auto& iv : ivals) {
            total += iv.value;
            err += iv.error;
        }
        if (err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total))) break;
    }
    if (panel_edges) {
        panel_edges->clear();
        panel_edges->reserve(ivals.size() + 1);
        std::vector<double> lows;
        for (const auto& iv : ivals) lows.push_back(iv.a);
        std::sort(lows.begin(), lows.end());
        *panel_edges = std::move(lows);
        panel_edges->push_back(b);
    }
    QuadResult r;
    r.value = total;
    r.error = err;
    r.intervals = static_cast<int>(ivals.size());
    return r;
}

// Fixed K15 nodes/weights on each panel of a given subdivision. Node layout
// is deterministic, so repeated integrations share identical evaluation
// points -- required by the averaging module.
inline void kronrod_nodes_on_panels(const std::vector<double>& edges,
                                    std::vector<double>* nodes, std::vector<double>* weights) {
    nodes->clear();
    weights->clear();
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double c = 0.5 * (edges[p] + edges[p + 1]);
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < 7; ++i) {
            const double x = detail::kKronrodNodes[i];
            nodes->push_back(c - h * x);
            weights->push_back(detail::kKronrodWeights[i] * h);
            nodes->push_back(c + h * x);
            weights->push_back(detail::kKronrodWeights[i] * h);
        }
        nodes->push_back(c);
        weights->push_back(detail::kKronrodWeights[7] * h);
    }
}

template <typename F>
double integrate_panels(F&& f, const std::vector<double>& edges) {
    double total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p)
        total += gauss_kronrod_15(f, edges[p], edges[p + 1]).value;
    return total;
}

}  // namespace tsq
