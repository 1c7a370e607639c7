#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "burgers/family.hpp"
#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers::metastability {

// Outcome of the two-parameter projection fit.  residual_projections holds
// <v*, psi_n> for n = 0,1,2 at the returned (x*, t*); A_matrix is the 2x2
// Jacobian of the nonzero projections in (x*, t*), rows n = 1,2, columns
// (d/dx*, d/dt*).  residual_history records max(|<v,psi_1>|, |<v,psi_2>|)
// per Newton iterate.
struct FitResult {
    double x_star;
    double t_star;
    Eigen::Vector3d residual_projections;
    Eigen::Matrix2d A_matrix;
    double det_A;
    int iterations;
    bool converged;
    std::vector<double> residual_history;
};

struct TrackPoint {
    double tau;
    double distance;
    double x_star;
    double t_star;
    double det_A;
    bool converged;
};

struct DecayWindow {
    double tau_min;
    double tau_max;
};

struct DecayFit {
    DecayWindow window;
    double rate;
    double r_squared;
};

// Adjoint triple (psi_0, psi_1, psi_2) on g at family time p.t, layer at
// x = 0.  psi_0 = 1/sqrt(2 pi); psi_1 and psi_2 are the biorthogonal
// adjoints rescaled to the moments <1, psi_1> = -sqrt(pi) and
// <m, psi_2> = -sqrt(pi)/2, where m(x) is the well coordinate
// reduce_to_period(x - pi).  Those moments make the projection Jacobian
// approach [[-sqrt(pi)/t, -c sqrt(pi)/t], [0, -sqrt(pi)/(2 t^2)]].
// Throws domain_error when nu*t < 3.6e-3, where the conjugation weight
// overflows the double range.
std::vector<solver::GridFunction> adjoint_basis(const Grid& g,
                                                const family::FamilyParams& p);

// <u - W(.; x0, t0, nu, c), psi_n> for n = 0,1,2 with the basis recentred on
// the family profile: both v and psi_n are evaluated in the frame where the
// layer sits at 0, u resampled by trigonometric interpolation at the shift
// x0 + c*t0.  p supplies nu and c; x0 and t0 override p.dx and p.t.
Eigen::Vector3d projections(const solver::GridFunction& u, double x0, double t0,
                            const family::FamilyParams& p);

// Newton iteration on (<v*, psi_1>, <v*, psi_2>) = 0 over (x*, t*), basis
// and Jacobian rebuilt each iterate at the current t*.  Converged when both
// projections fall below 1e-9*||v*|| plus a 1e-12 quadrature floor; marked
// not converged after 25 iterates or when an update leaves the valid family
// range.  Throws domain_error when the initial L2 distance reaches 0.2 of
// the profile norm and runtime_error when |det A| drops below
// 1e-3 * pi/(2 t^3).
FitResult fit_parameters(const solver::GridFunction& u, double x0_init,
                         double t0_init, double nu, double c);

// L2 distance ||u - W(.; x_star, t_star, nu, c)|| evaluated in the reduced
// frame used by the fit.
double family_distance(const solver::GridFunction& u, double x_star,
                       double t_star, double nu, double c);

// (<dW0/dx, psi_1>, <dW0/dt, psi_2>) at (p.nu, p.t) by quadrature on an
// internal grid with 16 pi nodes per eps.  The asymptotic values are
// -sqrt(pi)/t * (1 + O(eps^{3/2})) and sqrt(pi)/(2 t^2) * (1 + O(eps)).
// Requires the asymptotic regime eps <= 0.25.
std::array<double, 2> inner_product_checks(const family::FamilyParams& p);

// Per-snapshot fit chain: the first fittable snapshot is fitted cold (layer
// located at the steepest descent of u, t* from the sawtooth amplitude),
// later ones warm-start from the previous fit with t* advanced by the
// elapsed time.  Snapshots whose fit throws or diverges are kept in the
// series with converged = false and the distance at the best available
// parameters.
std::vector<TrackPoint> track_distance(const std::vector<solver::Snapshot>& snapshots,
                                       double nu);

// Least-squares slope of log(distance) against tau over the converged points
// inside the window.  Throws invalid_argument on a degenerate window: bounds
// out of order, fewer than 5 usable points, or a distance at the quadrature
// floor 1e-12.
DecayFit fit_decay_rate(const std::vector<TrackPoint>& series, DecayWindow window);

// CSV columns tau,distance,x_star,t_star,det_A,converged (flag as 0/1),
// shortest round-trip formatting.
void export_track(const std::filesystem::path& path,
                  const std::vector<TrackPoint>& series);

}  // namespace burgers::metastability
