#pragma once

// Transient Fokker-Planck solver for the dispersion density
//   df/dt = (omega^2/2) d^2(y f)/dy^2 - d(alpha f)/dy
// as a conservative finite-volume scheme with exponentially fitted
// (Chang-Cooper) fluxes and zero flux at both ends. Used as a convergence
// oracle for the stationary density.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "tsq/drift.hpp"

namespace tsq {

struct EvolutionGrid {
    Eigen::ArrayXd edges;    // n_cells + 1, edges[0] == 0
    Eigen::ArrayXd centers;  // n_cells
    Eigen::ArrayXd widths;   // n_cells
};

// geometric-near-zero grid transitioning to uniform
EvolutionGrid make_evolution_grid(double y_max, int n_cells = 400, double focus = -1.0,
                                  double focus_width = -1.0);

struct EvolveOptions {
    double dt = 0.0;     // <= 0: horizon / max(400, 200*horizon)
    int snapshots = 50;  // stored states in addition to the final one
};

struct DensityEvolution {
    EvolutionGrid grid;
    std::vector<double> times;             // snapshot times (last == horizon)
    std::vector<Eigen::ArrayXd> states;    // cell densities per snapshot
    Eigen::ArrayXd step_times;             // every accepted step
    Eigen::ArrayXd mass_history;           // mass after every accepted step

    const Eigen::ArrayXd& final_state() const { return states.back(); }
};

DensityEvolution evolve_density(const DriftFunction& drift, double omega,
                                const Eigen::ArrayXd& f0, const EvolutionGrid& grid,
                                double horizon, const EvolveOptions& opts = {});

// cell averages of a pointwise density
Eigen::ArrayXd project_onto_grid(const std::function<double(double)>& f, const EvolutionGrid& grid);
// narrow Gamma with mean y0 and std = local cell width, standing in for a
// Dirac initial datum
Eigen::ArrayXd dirac_approximation(double y0, const EvolutionGrid& grid);

double grid_mass(const EvolutionGrid& grid, const Eigen::ArrayXd& f);
double l1_distance(const EvolutionGrid& grid, const Eigen::ArrayXd& f, const Eigen::ArrayXd& g);

}  // namespace tsq
