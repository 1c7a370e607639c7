#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <vector>

#include "burgers/family.hpp"
#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers::spectrum {

enum class Discretization { fourier_pseudospectral, finite_difference_4th };
enum class Operator { L, Ltilde };

// Periodic differentiation matrices on Grid(M); spectral ones are the
// classical trigonometric cardinal-function formulas, FD ones are 4th order
// centered circulants.
Eigen::MatrixXd derivative_matrix(Discretization kind, int M);
Eigen::MatrixXd second_derivative_matrix(Discretization kind, int M);

struct OperatorDiscretization {
    int M;
    Discretization kind;
    Operator which;
    family::FamilyParams p;
    Eigen::MatrixXd matrix;
    // M*eps^2 >= 8*pi, i.e. the layer width is resolved, not just the wells.
    // Assembly requires only M*eps >= 8*pi; eigenvalues converge well before
    // the layer spike of 1/theta is representable on the grid.
    bool resolves_fast_scale;
};

OperatorDiscretization assemble(Discretization kind, int M,
                                const family::FamilyParams& p, Operator which);

// Matrix-free application of L: nu*u_xx - (w0*u)_x via spectral derivatives,
// for grids too large to hold the dense matrix (sharp-layer zero-mode checks).
Eigen::ArrayXd apply_l(const Grid& g, const family::FamilyParams& p,
                       const Eigen::ArrayXd& u);

struct SpectralResult {
    Eigen::ArrayXd eigenvalues;  // descending
    std::vector<solver::GridFunction> eigenfunctions;  // unit L2, sign-normalized
    Eigen::ArrayXd residuals;
    // First pair is the analytic zero mode (lambda0 = 0 exactly, eigenfunction
    // proportional to 1/theta); its residual row measures the discretization,
    // the remaining rows are residuals of the deflated solve.
    bool analytic_zero_mode;
};

// Top-k eigenpairs, k <= 10.  For Ltilde the solve is dense symmetric with
// the analytic zero mode deflated out first; for L a nonsymmetric solve kept
// for similarity cross-checks only.
SpectralResult eigenpairs(const OperatorDiscretization& opd, int k);

// Analytic eigenfunction samples, unit L2 norm: zero_mode is C/(psi^W)^2 for
// the operator L, tilde_zero_mode is 1/psi^W for the conjugated operator.
solver::GridFunction zero_mode(const Grid& g, const family::FamilyParams& p);
solver::GridFunction tilde_zero_mode(const Grid& g, const family::FamilyParams& p);

// Sign changes between adjacent samples (cyclically), collapsing near-zero
// plateaus below 1e-10 * max|phi|.  Throws if fewer than 16 signed samples
// survive the banding.
int zero_count(const solver::GridFunction& phi);

// Eigenpair of L itself on a layer-resolving grid (M * eps^2 >= 16 pi):
// sparse 4th-order stencils, shifted inverse iteration at -n/t.  Reaches
// grids the dense solvers cannot, and keeps the well lobes of phi_n above
// rounding; eigenvalue is the Rayleigh quotient of the converged vector.
struct LayerMode {
    double lambda;
    solver::GridFunction phi;
};
LayerMode l_eigenfunction(const family::FamilyParams& p, int M, int n);

// psi_n = theta * phitilde_n scaled so that <T phitilde_n, psi_n> = 1, with
// phitilde_n taken from a Ltilde SpectralResult; psi_0 = 1/sqrt(2 pi).
solver::GridFunction adjoint_eigenfunction(int n, const SpectralResult& spec,
                                           const family::FamilyParams& p);

// Fast-scale profiles: p_profile solves g'' + pi^2 (2 sech^2(pi z) - 1) g = 0,
// q_profile is the growing companion, p1_profile the particular solution of
// the first correction with forcing [1 + lh - 2 pi z tanh(pi z)] P (the free
// multiple of P is fixed to zero).
double p_profile(double z);
double q_profile(double z);
double p1_profile(double z, double lambda_hat);

// Glued asymptotic eigenfunction: Hermite-Gaussian slow profile about the
// wells plus a fast core at the layer, with the shared exponential tail
// subtracted once.  Coordinates follow the solver grid: layer at x = 0,
// wells at x = +-pi.
struct MatchedEigenfunction {
    int n;
    double epsilon;
    double C;  // gluing constant multiplying the fast profile

    // Pieces in the distance-to-layer coordinate d in [0, 2 pi); the
    // composite evaluates slow(d) + [fast - overlap](d) + parity * (mirror).
    double slow(double d) const;
    double fast(double d) const;     // C * (P + eps^2 P1) or C * Q at z = d/eps^2
    double overlap(double d) const;  // shared growing tail, finite only near the layer
    double remainder(double d) const;  // fast - overlap in cancellation-free form

    double operator()(double x) const;
    solver::GridFunction sample(const Grid& g) const;
};

MatchedEigenfunction matched_eigenfunction(int n, double epsilon);

struct PredictedEigenvalue {
    double lambda;
    double bar;  // magnitude of the exponentially small correction
};

// lambda_n = -n/t for n = 0..4 with correction bars
// [0, eps^{1/2}, eps^{-2}, eps^{-7/2}, eps^{-6}] * exp(-1/eps^2).
std::vector<PredictedEigenvalue> predicted_eigenvalues(double epsilon, double t);

// Scaled mismatch of the slow/fast logarithmic-derivative ratios at the
// matching point, linearized about the crossing and with the common factor
// exp(xi0^2) removed so it stays representable: vanishes exactly at the
// eigenvalue the matching predicts, grows linearly away from it.
double matching_residual(int n, double lambda, double epsilon, double t);

void export_spectrum(const std::filesystem::path& path, const SpectralResult& spec);
void export_eigenfunctions(const std::filesystem::path& path, const Grid& g,
                           const SpectralResult& spec);

}  // namespace burgers::spectrum
