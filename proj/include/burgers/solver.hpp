#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "burgers/grid.hpp"

namespace burgers::solver {

struct GridFunction {
    Grid grid;
    Eigen::ArrayXd values;
};

struct SimConfig {
    double nu;
    int M;
    double cfl_lambda = 0.5;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    int modes = 1;
    double a0 = 0.0;

    void validate() const;  // throws std::invalid_argument
};

struct Snapshot {
    double time;
    GridFunction u;
};

// u(x,0) = a0 + sum_{n=1..m} [a_n sin(nx) + b_n cos(nx)], coefficients drawn
// from the seeded stream in the order a1, b1, a2, b2, ...
GridFunction random_initial_data(const SimConfig& cfg);

// Exact Riemann flux for f(u) = u^2/2 with the sonic rarefaction fix.
double godunov_flux(double ul, double ur);

// k = min{lambda h / max|u|, lambda h^2 / (2 nu)}, recomputed from the
// current state every step.
double cfl_timestep(const GridFunction& u, const SimConfig& cfg);

// One explicit step: Godunov flux differences plus centered diffusion.
GridFunction step(const GridFunction& u, const SimConfig& cfg);

// Snapshots are recorded at the first step time >= each requested time, with
// the actual time; a requested time <= 0 records the initial data.
std::vector<Snapshot> simulate(const SimConfig& cfg, const std::vector<double>& snapshot_times);

// Same run from caller-supplied initial data; cfg.seed, modes, a0 are unused.
std::vector<Snapshot> simulate(const SimConfig& cfg, const GridFunction& u0,
                               const std::vector<double>& snapshot_times);

// y0 = argmax over the grid of -int_0^y (u0 - mean), trapezoid cumulative
// sum refined by quadratic interpolation around the discrete max. Throws if
// a second maximum ties the global one to 1e-12 away from its neighborhood.
double primitive_argmax(const GridFunction& u0);

// One CSV per snapshot, named snap_t<time>.csv with the time printed to six
// significant digits, columns x,u.
void export_snapshots(const std::filesystem::path& dir, const std::vector<Snapshot>& snaps);

}  // namespace burgers::solver
