#include "burgers/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "burgers/io.hpp"
#include "burgers/rng.hpp"

namespace burgers::solver {

namespace {

GridFunction advance(const GridFunction& u, const SimConfig& cfg, double k) {
    const int M = u.grid.M;
    const double h = u.grid.h();
    const Eigen::ArrayXd& v = u.values;

    Eigen::ArrayXd flux(M);  // flux[j] lives on the interface between j and j+1
    for (int j = 0; j < M; ++j) flux[j] = godunov_flux(v[j], v[(j + 1) % M]);

    Eigen::ArrayXd next(M);
    const double r = k / h;
    const double d = cfg.nu * k / (h * h);
    for (int j = 0; j < M; ++j) {
        const int jm = (j + M - 1) % M;
        const int jp = (j + 1) % M;
        next[j] = v[j] - r * (flux[j] - flux[jm]) + d * (v[jp] - 2.0 * v[j] + v[jm]);
    }
    return {u.grid, std::move(next)};
}

}  // namespace

void SimConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("SimConfig: nu must be positive");
    if (M < 16 || M % 2 != 0) throw std::invalid_argument("SimConfig: M must be even and >= 16");
    if (!(cfl_lambda > 0.0) || !(cfl_lambda < 1.0))
        throw std::invalid_argument("SimConfig: cfl_lambda must lie in (0,1)");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SimConfig: t_end must be nonnegative");
    if (modes < 1 || modes >= M / 2)
        throw std::invalid_argument("SimConfig: modes must satisfy 1 <= m < M/2");
}

GridFunction random_initial_data(const SimConfig& cfg) {
    cfg.validate();
    const Grid g(cfg.M);
    SplitMix64 rng(cfg.seed);

    std::vector<double> a(cfg.modes), b(cfg.modes);
    for (int n = 0; n < cfg.modes; ++n) {
        a[n] = rng.next_uniform();
        b[n] = rng.next_uniform();
    }

    Eigen::ArrayXd u(cfg.M);
    for (int j = 0; j < cfg.M; ++j) {
        const double x = g.x(j);
        double s = cfg.a0;
        for (int n = 1; n <= cfg.modes; ++n)
            s += a[n - 1] * std::sin(n * x) + b[n - 1] * std::cos(n * x);
        u[j] = s;
    }
    return {g, std::move(u)};
}

double godunov_flux(double ul, double ur) {
    if (ul <= ur) {
        if (ul <= 0.0 && 0.0 <= ur) return 0.0;  // sonic rarefaction
        return 0.5 * std::min(ul * ul, ur * ur);
    }
    return 0.5 * std::max(ul * ul, ur * ur);
}

double cfl_timestep(const GridFunction& u, const SimConfig& cfg) {
    if (!u.values.isFinite().all()) throw std::runtime_error("cfl_timestep: non-finite state");
    const double h = u.grid.h();
    const double diffusive = cfg.cfl_lambda * h * h / (2.0 * cfg.nu);
    const double umax = u.values.abs().maxCoeff();
    if (umax == 0.0) return diffusive;
    return std::min(cfg.cfl_lambda * h / umax, diffusive);
}

GridFunction step(const GridFunction& u, const SimConfig& cfg) {
    return advance(u, cfg, cfl_timestep(u, cfg));
}

std::vector<Snapshot> simulate(const SimConfig& cfg, const GridFunction& u0,
                               const std::vector<double>& snapshot_times) {
    cfg.validate();
    if (u0.grid.M != cfg.M) throw std::invalid_argument("simulate: initial data does not match cfg.M");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
        throw std::invalid_argument("simulate: snapshot times must be ascending");
    if (!snapshot_times.empty() && snapshot_times.back() > cfg.t_end)
        throw std::invalid_argument("simulate: snapshot times must not exceed t_end");

    GridFunction u = u0;
    std::vector<Snapshot> out;
    std::size_t idx = 0;
    while (idx < snapshot_times.size() && snapshot_times[idx] <= 0.0) {
        out.push_back({0.0, u});
        ++idx;
    }

    double t = 0.0;
    while (t < cfg.t_end && idx < snapshot_times.size()) {
        const double k = cfl_timestep(u, cfg);
        u = advance(u, cfg, k);
        t += k;
        while (idx < snapshot_times.size() && t >= snapshot_times[idx]) {
            out.push_back({t, u});
            ++idx;
        }
    }
    return out;
}

std::vector<Snapshot> simulate(const SimConfig& cfg, const std::vector<double>& snapshot_times) {
    cfg.validate();
    return simulate(cfg, random_initial_data(cfg), snapshot_times);
}

double primitive_argmax(const GridFunction& u0) {
    const int M = u0.grid.M;
    const double h = u0.grid.h();
    const double ubar = mean(u0.grid, u0.values);

    // G_j = -int_{-pi}^{x_j} (u0 - ubar); the base-point shift to 0 is a
    // constant and does not move the argmax
    Eigen::ArrayXd G(M);
    G[0] = 0.0;
    for (int j = 1; j < M; ++j)
        G[j] = G[j - 1] - 0.5 * h * ((u0.values[j - 1] - ubar) + (u0.values[j] - ubar));

    int jmax = 0;
    for (int j = 1; j < M; ++j)
        if (G[j] > G[jmax]) jmax = j;

    for (int j = 0; j < M; ++j) {
        const int dist = std::min((j - jmax + M) % M, (jmax - j + M) % M);
        if (dist > 2 && G[j] > G[jmax] - 1e-12)
            throw std::runtime_error("primitive_argmax: global maximum is not unique");
    }

    const double gm = G[(jmax + M - 1) % M];
    const double gp = G[(jmax + 1) % M];
    const double curv = gm - 2.0 * G[jmax] + gp;
    double delta = 0.0;
    if (curv < 0.0) delta = 0.5 * h * (gm - gp) / curv;
    return reduce_to_period(u0.grid.x(jmax) + delta);
}

void export_snapshots(const std::filesystem::path& dir, const std::vector<Snapshot>& snaps) {
    for (const auto& s : snaps) {
        const Eigen::ArrayXd xs = s.u.grid.nodes();
        const std::string name = "snap_t" + io::format_sig(s.time, 6) + ".csv";
        io::write_csv(dir / name, {{"x", &xs}, {"u", &s.u.values}}, 6);
    }
}

}  // namespace burgers::solver
