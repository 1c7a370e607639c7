#include "burgers/family.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "burgers/grid.hpp"

namespace burgers::family {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxImages = 12;

// Index of the image whose Gaussian dominates at x.
int dominant_image(double x) { return static_cast<int>(std::lround((x + kPi) / (2.0 * kPi))); }

double image_exponent(double x, double nu_t, int n) {
    const double d = x + kPi - 2.0 * kPi * n;
    return -d * d / (4.0 * nu_t);
}

}  // namespace

double FamilyParams::eps() const { return std::sqrt(2.0 * nu * t); }

void FamilyParams::validate() const {
    if (!(nu > 0.0) || !(t > 0.0))
        throw std::invalid_argument("FamilyParams: nu and t must be positive");
}

ThetaSum ThetaSum::choose(double x, double nu_t) {
    const int n0 = dominant_image(x);
    const double emax = image_exponent(x, nu_t, n0);
    for (int N = 1; N < kMaxImages; ++N) {
        const double lo = image_exponent(x, nu_t, n0 - (N + 1));
        const double hi = image_exponent(x, nu_t, n0 + (N + 1));
        // First omitted term below 1e-16 of the retained sum (>= e^emax).
        if (std::max(lo, hi) - emax < std::log(1e-16)) return {N};
    }
    return {kMaxImages};
}

ThetaMoments theta_moments(double x, double nu_t, ThetaSum trunc) {
    const int n0 = dominant_image(x);
    const double emax = image_exponent(x, nu_t, n0);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int n = n0 - trunc.truncation_N; n <= n0 + trunc.truncation_N; ++n) {
        const double d = x + kPi - 2.0 * kPi * n;
        const double w = std::exp(image_exponent(x, nu_t, n) - emax);
        s0 += w;
        s1 += d * w;
        s2 += d * d * w;
        s3 += d * d * d * w;
    }
    return {s1 / s0, s2 / s0, s3 / s0, emax + std::log(s0), trunc.truncation_N};
}

ThetaMoments theta_moments(double x, double nu_t) {
    return theta_moments(x, nu_t, ThetaSum::choose(x, nu_t));
}

double psi_w(double x, const FamilyParams& p) {
    return std::exp(log_psi_w(x, p));
}

double log_psi_w(double x, const FamilyParams& p) {
    p.validate();
    const double nu_t = p.nu * p.t;
    const auto m = theta_moments(reduce_to_period(x), nu_t);
    return m.log_sum - 0.5 * std::log(4.0 * kPi * nu_t);
}

double w0(double x, const FamilyParams& p) {
    p.validate();
    const auto m = theta_moments(reduce_to_period(x), p.nu * p.t);
    return m.E1 / p.t;
}

double w0_x(double x, const FamilyParams& p) {
    p.validate();
    const auto m = theta_moments(reduce_to_period(x), p.nu * p.t);
    const double var = m.E2 - m.E1 * m.E1;
    return (1.0 - var / (2.0 * p.nu * p.t)) / p.t;
}

double w0_t(double x, const FamilyParams& p) {
    p.validate();
    const auto m = theta_moments(reduce_to_period(x), p.nu * p.t);
    const double third = m.E3 - m.E1 * m.E2;
    return -m.E1 / (p.t * p.t) + third / (4.0 * p.nu * p.t * p.t * p.t);
}

double w_family(double x, double time, const FamilyParams& p) {
    if (!(time > 0.0)) throw std::invalid_argument("w_family: time must be positive");
    FamilyParams q = p;
    q.t = time;
    return p.c + w0(x - p.dx - p.c * time, q);
}

double w0_tanh_profile(double x, const FamilyParams& p) {
    p.validate();
    const double nu_t = p.nu * p.t;
    if (nu_t > 0.25) throw std::domain_error("w0_tanh_profile: valid for nu t <= 0.25");
    const double xr = reduce_to_period(x);
    return (xr - kPi * std::tanh(kPi * xr / (2.0 * nu_t))) / p.t;
}

double approximation_error(const FamilyParams& p) {
    const Grid g(4096);
    double sup = 0.0;
    for (int j = 0; j < g.M; ++j) {
        const double x = g.x(j);
        sup = std::max(sup, std::abs(w0(x, p) - w0_tanh_profile(x, p)));
    }
    return sup;
}

double conjugation_weight(double x, const FamilyParams& p) {
    return std::exp(-log_conjugation_weight_inverse(x, p));
}

double conjugation_weight_inverse(double x, const FamilyParams& p) {
    return std::exp(log_conjugation_weight_inverse(x, p));
}

double log_conjugation_weight_inverse(double x, const FamilyParams& p) {
    p.validate();
    return theta_moments(reduce_to_period(x), p.nu * p.t).log_sum;
}

double w_hat(double xi, double eps) {
    // (t/eps) W0(eps xi + pi) = E1/eps with nu t = eps^2/2.
    const auto m = theta_moments(reduce_to_period(eps * xi + kPi), 0.5 * eps * eps);
    return m.E1 / eps;
}

double w_hat_xi(double xi, double eps) {
    const auto m = theta_moments(reduce_to_period(eps * xi + kPi), 0.5 * eps * eps);
    const double var = m.E2 - m.E1 * m.E1;
    return 1.0 - var / (eps * eps);
}

}  // namespace burgers::family
