#include "tsq/averaging.hpp"

#include <cmath>
#include <vector>

#include "tsq/errors.hpp"
#include "tsq/interpolation.hpp"
#include "tsq/quadrature.hpp"

namespace tsq {

AveragedPrice average_a(const BondSurface2F& surface, const StationaryDensity& density,
                        int refine) {
    if (surface.y_max() < density.y_max() - 1e-12)
        throw DomainMismatch("average_a: surface y-grid does not span the density support");

    // fixed quadrature: density panels (optionally refined), K15 per panel
    std::vector<double> edges;
    const std::vector<double>& base = density.panels();
    const int split = 1 << std::max(0, refine);
    for (std::size_t p = 0; p + 1 < base.size(); ++p)
        for (int j = 0; j < split; ++j)
            edges.push_back(base[p] + (base[p + 1] - base[p]) * j / split);
    edges.push_back(base.back());

    std::vector<double> nodes, weights;
    kronrod_nodes_on_panels(edges, &nodes, &weights);

    const Eigen::MatrixXd& A = surface.A();
    std::vector<CubicStencil> stencils(nodes.size());
    Eigen::ArrayXd wf(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        stencils[q] = cubic_stencil(surface.y_grid(), nodes[q]);
        wf[static_cast<Eigen::Index>(q)] = weights[q] * density(nodes[q]);
    }

    AveragedPrice avg;
    avg.t_grid_ = surface.t_grid();
    avg.kappa_ = surface.model().rate.kappa;
    avg.T_ = surface.maturity();
    avg.a_.resize(avg.t_grid_.size());
    for (Eigen::Index j = 0; j < avg.t_grid_.size(); ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const CubicStencil& st = stencils[q];
            double ay = 0.0;
            for (int k = 0; k < 4; ++k) ay += st.w[static_cast<std::size_t>(k)] * A(st.i0 + k, j);
            acc += wf[static_cast<Eigen::Index>(q)] * ay;
        }
        avg.a_[j] = acc;
    }
    return avg;
}

double AveragedPrice::a_at(double t) const {
    if (t < t_grid_[0] - 1e-12 || t > T_ + 1e-12)
        throw OutOfGrid("AveragedPrice: t outside the solved range");
    return interp_linear(t_grid_, a_, t);
}

double AveragedPrice::B(double tau) const { return vasicek_B(kappa_, tau); }

double AveragedPrice::price(double t, double r) const {
    return a_at(t) * std::exp(-B(T_ - t) * r);
}

TermStructure AveragedPrice::term_structure(double r, const Eigen::ArrayXd& maturities) const {
    return tsq::term_structure([&](double tau) { return price_at_tau(tau, r); }, maturities);
}

ADerivativeEstimates estimate_a_derivatives(const AveragedPrice& avg, int stride) {
    const Eigen::Index n = avg.a().size();
    if (n < 9) throw InvalidInput("estimate_a_derivatives: a(t) grid too short");
    const double dt = avg.t_grid()[1] - avg.t_grid()[0];
    if (stride <= 0) stride = std::max<int>(1, static_cast<int>(std::lround((n - 1) / 500.0)));
    while (4 * stride >= n) stride = std::max(1, stride / 2);

    const double h = stride * dt;
    auto at = [&](int k) { return avg.a()[n - 1 - k * stride]; };  // a(T - k h)
    ADerivativeEstimates est;
    est.spacing = h;
    est.a1 = (3.0 * at(0) - 4.0 * at(1) + at(2)) / (2.0 * h);
    est.a2 = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
    est.a3 = (2.5 * at(0) - 9.0 * at(1) + 12.0 * at(2) - 7.0 * at(3) + 1.5 * at(4)) /
             (h * h * h);
    return est;
}

}  // namespace tsq
