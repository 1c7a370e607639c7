#include "burgers/metastability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "burgers/io.hpp"
#include "burgers/spectrum.hpp"

namespace burgers::metastability {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

// exp(pi^2 / (4 nu t)) must stay below the double range.
constexpr double kMinNuT = 3.6e-3;

void check_family_range(double nu, double t) {
    if (!(t > 0.0) || nu * t < kMinNuT)
        throw std::domain_error(
            "metastability: nu*t below 3.6e-3, conjugation weight overflows");
}

Eigen::ArrayXd well_coordinate(const Grid& g) {
    Eigen::ArrayXd m(g.M);
    for (int j = 0; j < g.M; ++j) m[j] = reduce_to_period(g.x(j) - kPi);
    return m;
}

struct Basis {
    Eigen::ArrayXd psi0, psi1, psi2;
    Eigen::ArrayXd w0v, w0x, w0t;
};

// Adjoints at family time q.t with the meta moment scalings, plus the family
// profile and its parameter derivatives on the same grid.
Basis build_basis(const Grid& g, const family::FamilyParams& q) {
    check_family_range(q.nu, q.t);
    const auto opd = spectrum::assemble(spectrum::Discretization::fourier_pseudospectral,
                                        g.M, q, spectrum::Operator::Ltilde);
    const auto spec = spectrum::eigenpairs(opd, 3);

    Basis b;
    b.psi0 = spectrum::adjoint_eigenfunction(0, spec, q).values;
    b.psi1 = spectrum::adjoint_eigenfunction(1, spec, q).values;
    b.psi2 = spectrum::adjoint_eigenfunction(2, spec, q).values;

    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(g.M);
    const double m1 = inner_product(g, ones, b.psi1);
    const double m2 = inner_product(g, well_coordinate(g), b.psi2);
    if (std::abs(m1) < 1e-8 || std::abs(m2) < 1e-8)
        throw std::runtime_error("metastability: adjoint moment collapsed");
    b.psi1 *= -kSqrtPi / m1;
    b.psi2 *= -0.5 * kSqrtPi / m2;

    b.w0v.resize(g.M);
    b.w0x.resize(g.M);
    b.w0t.resize(g.M);
    for (int j = 0; j < g.M; ++j) {
        const double y = g.x(j);
        b.w0v[j] = family::w0(y, q);
        b.w0x[j] = family::w0_x(y, q);
        b.w0t[j] = family::w0_t(y, q);
    }
    return b;
}

// v(y) = u(y + s) - c - W0(y), the perturbation in the frame with the layer
// at 0; u is resampled through its trigonometric interpolant.
Eigen::ArrayXd reduced_residual(const FourierInterpolant& uI, const Grid& g,
                                double s, double c, const Eigen::ArrayXd& w0v) {
    Eigen::ArrayXd v(g.M);
    for (int j = 0; j < g.M; ++j) v[j] = uI(g.x(j) + s) - c - w0v[j];
    return v;
}

void check_fit_grid(const Grid& g) {
    if (g.M > 2048)
        throw std::invalid_argument(
            "metastability: fit grid larger than 2048, downsample before fitting");
}

}  // namespace

std::vector<solver::GridFunction> adjoint_basis(const Grid& g,
                                                const family::FamilyParams& p) {
    p.validate();
    const Basis b = build_basis(g, p);
    std::vector<solver::GridFunction> out;
    out.push_back({g, b.psi0});
    out.push_back({g, b.psi1});
    out.push_back({g, b.psi2});
    return out;
}

Eigen::Vector3d projections(const solver::GridFunction& u, double x0, double t0,
                            const family::FamilyParams& p) {
    check_fit_grid(u.grid);
    const family::FamilyParams q{p.nu, t0, 0.0, 0.0};
    q.validate();
    const Basis b = build_basis(u.grid, q);
    const FourierInterpolant uI(u.grid, u.values);
    const Eigen::ArrayXd v =
        reduced_residual(uI, u.grid, x0 + p.c * t0, p.c, b.w0v);
    return {inner_product(u.grid, v, b.psi0), inner_product(u.grid, v, b.psi1),
            inner_product(u.grid, v, b.psi2)};
}

FitResult fit_parameters(const solver::GridFunction& u, double x0_init,
                         double t0_init, double nu, double c) {
    check_fit_grid(u.grid);
    check_family_range(nu, t0_init);
    const Grid& g = u.grid;
    const FourierInterpolant uI(g, u.values);

    {
        // Entry guard: L2 distance below 0.2 of the profile norm.  A shift by
        // one layer width is already an O(1) relative H1 perturbation, so an
        // H1 ratio would reject offsets the Newton iteration handles fine.
        const family::FamilyParams q{nu, t0_init, 0.0, 0.0};
        Eigen::ArrayXd w(g.M);
        for (int j = 0; j < g.M; ++j) w[j] = c + family::w0(g.x(j), q);
        Eigen::ArrayXd v(g.M);
        for (int j = 0; j < g.M; ++j)
            v[j] = uI(g.x(j) + x0_init + c * t0_init) - w[j];
        if (l2_norm(g, v) >= 0.2 * l2_norm(g, w))
            throw std::domain_error(
                "metastability: initial distance outside the fit neighborhood");
    }

    FitResult r;
    r.x_star = x0_init;
    r.t_star = t0_init;
    r.converged = false;

    for (int it = 1; it <= 25; ++it) {
        const family::FamilyParams q{nu, r.t_star, 0.0, 0.0};
        const Basis b = build_basis(g, q);
        const Eigen::ArrayXd v =
            reduced_residual(uI, g, r.x_star + c * r.t_star, c, b.w0v);

        const Eigen::Vector3d F{inner_product(g, v, b.psi0),
                                inner_product(g, v, b.psi1),
                                inner_product(g, v, b.psi2)};
        const Eigen::ArrayXd tcol = c * b.w0x - b.w0t;
        Eigen::Matrix2d A;
        A << inner_product(g, b.w0x, b.psi1), inner_product(g, tcol, b.psi1),
            inner_product(g, b.w0x, b.psi2), inner_product(g, tcol, b.psi2);

        r.residual_projections = F;
        r.A_matrix = A;
        r.det_A = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        r.iterations = it;
        r.residual_history.push_back(std::max(std::abs(F[1]), std::abs(F[2])));

        const double tol = 1e-9 * l2_norm(g, v) + 1e-12;
        if (std::abs(F[1]) <= tol && std::abs(F[2]) <= tol) {
            r.converged = true;
            return r;
        }
        if (std::abs(r.det_A) < 1e-3 * kPi / (2.0 * std::pow(r.t_star, 3)))
            throw std::runtime_error(
                "metastability: projection Jacobian is singular");

        const double dx = (-A(1, 1) * F[1] + A(0, 1) * F[2]) / r.det_A;
        const double dt = (A(1, 0) * F[1] - A(0, 0) * F[2]) / r.det_A;
        const double xs = r.x_star + dx;
        const double ts = r.t_star + dt;
        if (!std::isfinite(xs) || !std::isfinite(ts) || !(ts > 0.0) ||
            nu * ts < kMinNuT) {
            return r;  // left the valid family range, last evaluated state kept
        }
        r.x_star = xs;
        r.t_star = ts;
    }
    return r;
}

double family_distance(const solver::GridFunction& u, double x_star,
                       double t_star, double nu, double c) {
    const family::FamilyParams q{nu, t_star, 0.0, 0.0};
    q.validate();
    const Grid& g = u.grid;
    const FourierInterpolant uI(g, u.values);
    Eigen::ArrayXd w0v(g.M);
    for (int j = 0; j < g.M; ++j) w0v[j] = family::w0(g.x(j), q);
    return l2_norm(g, reduced_residual(uI, g, x_star + c * t_star, c, w0v));
}

std::array<double, 2> inner_product_checks(const family::FamilyParams& p) {
    p.validate();
    const double eps = p.eps();
    if (eps > 0.25)
        throw std::domain_error(
            "inner_product_checks: asymptotic regime requires eps <= 0.25");
    check_family_range(p.nu, p.t);

    int M = static_cast<int>(std::ceil(16.0 * kPi / eps));
    M = std::clamp(M + (M % 2), 256, 2048);
    const Grid g(M);
    const family::FamilyParams q{p.nu, p.t, 0.0, 0.0};
    const Basis b = build_basis(g, q);
    return {inner_product(g, b.w0x, b.psi1), inner_product(g, b.w0t, b.psi2)};
}

std::vector<TrackPoint> track_distance(const std::vector<solver::Snapshot>& snapshots,
                                       double nu) {
    if (snapshots.empty())
        throw std::invalid_argument("track_distance: no snapshots");
    const int M = snapshots.front().u.grid.M;
    for (const auto& s : snapshots)
        if (s.u.grid.M != M)
            throw std::invalid_argument("track_distance: snapshots on mixed grids");

    std::vector<TrackPoint> out;
    out.reserve(snapshots.size());
    bool have_warm = false;
    double warm_x = 0.0, warm_t = 0.0, warm_tau = 0.0;

    for (const auto& snap : snapshots) {
        const Grid& g = snap.u.grid;
        const double c = mean(g, snap.u.values);
        double x0, t0;
        if (have_warm) {
            x0 = warm_x;
            t0 = warm_t + (snap.time - warm_tau);
        } else {
            // Cold start: layer at the steepest descent of u, family time
            // from the sawtooth amplitude max|W0| = pi/t.
            const Eigen::ArrayXd ux = spectral_derivative(g, snap.u.values);
            int jmin = 0;
            for (int j = 1; j < g.M; ++j)
                if (ux[j] < ux[jmin]) jmin = j;
            const double amp = (snap.u.values - c).abs().maxCoeff();
            t0 = (amp > 0.0) ? kPi / amp : 1.0;
            x0 = g.x(jmin) - c * t0;
        }

        TrackPoint pt;
        pt.tau = snap.time;
        try {
            const FitResult r = fit_parameters(snap.u, x0, t0, nu, c);
            pt.distance = family_distance(snap.u, r.x_star, r.t_star, nu, c);
            pt.x_star = r.x_star;
            pt.t_star = r.t_star;
            pt.det_A = r.det_A;
            pt.converged = r.converged;
            if (r.converged) {
                warm_x = r.x_star;
                warm_t = r.t_star;
                warm_tau = snap.time;
                have_warm = true;
            }
        } catch (const std::domain_error&) {
            pt.distance = family_distance(snap.u, x0, t0, nu, c);
            pt.x_star = x0;
            pt.t_star = t0;
            pt.det_A = 0.0;
            pt.converged = false;
        } catch (const std::runtime_error&) {
            pt.distance = family_distance(snap.u, x0, t0, nu, c);
            pt.x_star = x0;
            pt.t_star = t0;
            pt.det_A = 0.0;
            pt.converged = false;
        }
        out.push_back(pt);
    }
    return out;
}

DecayFit fit_decay_rate(const std::vector<TrackPoint>& series, DecayWindow window) {
    if (!(window.tau_min < window.tau_max))
        throw std::invalid_argument("fit_decay_rate: degenerate window");
    std::vector<double> tau, logd;
    for (const auto& pt : series) {
        if (!pt.converged || pt.tau < window.tau_min || pt.tau > window.tau_max)
            continue;
        if (pt.distance <= 1e-12)
            throw std::invalid_argument(
                "fit_decay_rate: distance at the quadrature floor inside the window");
        tau.push_back(pt.tau);
        logd.push_back(std::log(pt.distance));
    }
    if (tau.size() < 5)
        throw std::invalid_argument(
            "fit_decay_rate: fewer than 5 usable points in the window");

    const double n = static_cast<double>(tau.size());
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        tm += tau[i];
        ym += logd[i];
    }
    tm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        const double dx = tau[i] - tm;
        const double dy = logd[i] - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_decay_rate: window collapses to one time");

    DecayFit fit;
    fit.window = window;
    fit.rate = sxy / sxx;
    fit.r_squared = (syy > 0.0) ? std::clamp(1.0 - (syy - sxy * sxy / sxx) / syy, 0.0, 1.0)
                                : 1.0;
    return fit;
}

void export_track(const std::filesystem::path& path,
                  const std::vector<TrackPoint>& series) {
    const auto n = static_cast<Eigen::Index>(series.size());
    Eigen::ArrayXd tau(n), dist(n), xs(n), ts(n), det(n), conv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& pt = series[static_cast<std::size_t>(i)];
        tau[i] = pt.tau;
        dist[i] = pt.distance;
        xs[i] = pt.x_star;
        ts[i] = pt.t_star;
        det[i] = pt.det_A;
        conv[i] = pt.converged ? 1.0 : 0.0;
    }
    io::write_csv(path,
                  {{"tau", &tau},
                   {"distance", &dist},
                   {"x_star", &xs},
                   {"t_star", &ts},
                   {"det_A", &det},
                   {"converged", &conv}},
                  0);
}

}  // namespace burgers::metastability
