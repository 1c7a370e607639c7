#include "burgers/cole_hopf.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace burgers::cole_hopf {

namespace {

constexpr double kPi = std::numbers::pi;

// 64-point Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_64.
const std::array<std::pair<double, double>, 64>& gauss_legendre_64() {
    static const auto table = [] {
        constexpr int n = 64;
        std::array<std::pair<double, double>, n> t{};
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            t[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return t;
    }();
    return table;
}

double golden_section_max(const Antiderivative& F, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = F(c), fd = F(d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = F(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = F(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

void CHProblem::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("CHProblem: nu must be positive");
    if (std::abs(mean(u0.grid, u0.values)) > 1e-10)
        throw std::invalid_argument("CHProblem: u0 must have zero mean");
}

CHProblem make_problem(const solver::GridFunction& u, double nu) {
    const double c = mean(u.grid, u.values);
    return {{u.grid, u.values - c}, c, nu};
}

Antiderivative::Antiderivative(const solver::GridFunction& u0) : interp_(u0.grid, u0.values) {}

CHSolution::CHSolution(CHProblem prob)
    : prob_(std::move(prob)), F_(prob_.u0), f_range_(0.0), y0_(0.0) {
    prob_.validate();
    double lo = F_(prob_.u0.grid.x(0)), hi = lo;
    for (int j = 1; j < prob_.u0.grid.M; ++j) {
        const double v = F_(prob_.u0.grid.x(j));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    f_range_ = hi - lo;
    if (f_range_ < 1e-12) return;  // flat primitive, any base point serves

    const double h = prob_.u0.grid.h();
    const double yg = solver::primitive_argmax(prob_.u0);
    y0_ = reduce_to_period(golden_section_max(F_, yg - h, yg + h));
}

double CHSolution::operator()(double x, double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("ch_solution: t must be positive");
    const double nu = prob_.nu;
    const double xs = x - prob_.c * t;

    // Gaussian tail below 1e-16 of the peak even after F's variation is
    // absorbed into the exponent maximum
    const double L = std::sqrt(4.0 * nu * t * 40.0 + 2.0 * t * f_range_);
    const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * L / std::sqrt(nu * t))));
    const auto& rule = gauss_legendre_64();

    std::vector<double> ys, ws, es;
    ys.reserve(static_cast<std::size_t>(panels) * rule.size());
    ws.reserve(ys.capacity());
    es.reserve(ys.capacity());

    const double a0 = xs - L;
    const double pw = 2.0 * L / panels;
    double emax = -std::numeric_limits<double>::infinity();
    for (int p = 0; p < panels; ++p) {
        const double mid = a0 + (p + 0.5) * pw;
        for (const auto& [node, weight] : rule) {
            const double y = mid + 0.5 * pw * node;
            const double e = (F_(y) - (xs - y) * (xs - y) / (2.0 * t)) / (2.0 * nu);
            ys.push_back(y);
            ws.push_back(0.5 * pw * weight);
            es.push_back(e);
            emax = std::max(emax, e);
        }
    }
    if (!std::isfinite(emax))
        throw std::runtime_error("ch_solution: exponent max cannot be bracketed");

    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double w = ws[i] * std::exp(es[i] - emax);
        s0 += w;
        s1 += w * (xs - ys[i]);
    }
    return prob_.c + s1 / (t * s0);
}

double CHSolution::laplace_profile(double x, double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("laplace_profile: t must be positive");
    const double s = reduce_to_period(x - y0_ - kPi);
    return (s - kPi * std::tanh(kPi * s / (2.0 * prob_.nu * t))) / t + prob_.c;
}

double ch_solution(const CHProblem& prob, double x, double t) {
    return CHSolution(prob)(x, t);
}

double laplace_profile(const CHProblem& prob, double x, double t) {
    return CHSolution(prob).laplace_profile(x, t);
}

}  // namespace burgers::cole_hopf
