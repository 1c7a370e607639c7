#include "burgers/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace burgers::special_fn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;
const double kSqrtPi = std::sqrt(kPi);

// Digamma values at the half-integers needed by the slow table.
// psi(-5/2) = 46/15 - gamma - ln4 by the recurrence psi(x+1) = psi(x) + 1/x;
// the mis-simplification 3 - gamma - ln4 fails the quadrature cross-check.
const double kPsiHalf = -kGamma - std::log(4.0);
const double kPsiMinusHalf = 2.0 - kGamma - std::log(4.0);
const double kPsiMinus3Half = 8.0 / 3.0 - kGamma - std::log(4.0);
const double kPsiMinus5Half = 46.0 / 15.0 - kGamma - std::log(4.0);

double dawson_series(double x) {
    // D(x) = sum_n (-1)^n 2^n x^(2n+1) / (1*3*...*(2n+1))
    double term = x;
    double sum = x;
    for (int n = 1; n <= 64; ++n) {
        term *= -2.0 * x * x / (2 * n + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double dawson_rybicki(double x) {
    // D(x) ~ (1/sqrt(pi)) sum_{n odd} exp(-(x - n h)^2) / n, h = 0.2.
    // Truncation at |x - n h| = 6.5 leaves a remainder below 1e-18.
    constexpr double h = 0.2;
    const int nlo = static_cast<int>(std::floor((x - 6.5) / h));
    const int nhi = static_cast<int>(std::ceil((x + 6.5) / h));
    double sum = 0.0;
    for (int n = nlo | 1; n <= nhi; n += 2) {
        const double d = x - n * h;
        sum += std::exp(-d * d) / n;
    }
    return sum / kSqrtPi;
}

double dawson_asymptotic(double x) {
    // D(x) ~ (1/2x) sum_k (2k-1)!! / (2x^2)^k, truncated at the smallest term.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 60; ++k) {
        const double next = term * (2 * k - 1) / (2.0 * x * x);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum / (2.0 * x);
}

}  // namespace

double dawson(double x) {
    const double ax = std::abs(x);
    double d;
    if (ax <= 1.5) {
        d = dawson_series(ax);
    } else if (ax < 7.0) {
        d = dawson_rybicki(ax);
    } else {
        d = dawson_asymptotic(ax);
    }
    return x < 0 ? -d : d;
}

double scaled_erfi(double x) { return 2.0 * dawson(x) / kSqrtPi; }

double erfi(double x) { return std::exp(x * x) * scaled_erfi(x); }

double polylog(int s, double x) {
    if (s != 2 && s != 3) throw std::domain_error("polylog: order must be 2 or 3");
    if (x < -1.0 || x > 0.0) throw std::domain_error("polylog: argument outside [-1, 0]");
    if (x == 0.0) return 0.0;
    if (x == -1.0) {
        constexpr double zeta3 = 1.2020569031595942854;
        return s == 2 ? -kPi * kPi / 12.0 : -0.75 * zeta3;
    }
    double term = x;
    double sum = x;
    for (long long k = 2;; ++k) {
        term *= x;
        const double tk = s == 2 ? term / (double(k) * k) : term / (double(k) * k * k);
        sum += tk;
        if (std::abs(tk) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double hermite(int n, double x) {
    if (n < 0 || n > 8) throw std::invalid_argument("hermite: order must be in [0, 8]");
    if (n == 0) return 1.0;
    double hm = 1.0;
    double h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hp = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = hp;
    }
    return h;
}

double stable_sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

double stable_tanh_defect(double x) {
    const double e = std::exp(-2.0 * std::abs(x));
    return 2.0 * e / (1.0 + e);
}

double slow_table_expansion(SlowIntegral row, double xi) {
    const double x2 = xi * xi;
    const double g = std::exp(-x2);
    switch (row) {
        case SlowIntegral::erfi_row:
            return std::exp(x2) / (xi * kSqrtPi) * (1.0 + 1.0 / (2.0 * x2));
        case SlowIntegral::gauss_integral:
            return kSqrtPi / 2.0 - g / (2.0 * xi) * (1.0 - 1.0 / (2.0 * x2));
        case SlowIntegral::gauss_moment2:
            return kSqrtPi / 4.0 - g * (xi / 4.0) * (2.0 + 1.0 / x2);
        case SlowIntegral::gauss_moment4:
            return 3.0 * kSqrtPi / 8.0 - g * (xi * x2 / 4.0) * (2.0 + 3.0 / x2);
        case SlowIntegral::gauss_moment6:
            return 15.0 * kSqrtPi / 16.0 - g * (x2 * x2 * xi / 4.0) * (2.0 + 5.0 / x2);
        case SlowIntegral::erfi_gauss_integral:
            return -std::log(1.0 / xi) - 0.5 * kPsiHalf;
        case SlowIntegral::defect_moment1:
            return 0.5 * std::log(1.0 / xi) + 0.25 * kPsiMinusHalf;
        case SlowIntegral::defect_moment3:
            return -x2 / 4.0 + 0.75 * std::log(1.0 / xi) + 0.375 * kPsiMinus3Half;
        case SlowIntegral::defect_moment5:
            return -x2 * (x2 + 3.0) / 8.0 + 1.875 * std::log(1.0 / xi) + 0.9375 * kPsiMinus5Half;
    }
    throw std::invalid_argument("slow_table_expansion: unknown row");
}

double slow_table_first_omitted(SlowIntegral row, double xi) {
    const double x2 = xi * xi;
    const double g = std::exp(-x2);
    switch (row) {
        case SlowIntegral::erfi_row:
            return std::exp(x2) / (xi * kSqrtPi) * 0.75 / (x2 * x2);
        case SlowIntegral::gauss_integral:
            return g / (2.0 * xi) * 0.75 / (x2 * x2);
        case SlowIntegral::gauss_moment2:
            return g / (8.0 * xi * x2);
        case SlowIntegral::gauss_moment4:
            return 3.0 * g / (8.0 * xi);
        case SlowIntegral::gauss_moment6:
            return 15.0 * xi * g / 8.0;
        case SlowIntegral::erfi_gauss_integral:
            return 0.25 / x2;
        case SlowIntegral::defect_moment1:
            return 0.375 / x2;
        case SlowIntegral::defect_moment3:
            return 0.9375 / x2;
        case SlowIntegral::defect_moment5:
            return 3.28125 / x2;
    }
    throw std::invalid_argument("slow_table_first_omitted: unknown row");
}

std::vector<ExpansionTerm> slow_table_terms(SlowIntegral row) {
    using K = TermKind;
    switch (row) {
        case SlowIntegral::erfi_row:
            return {{1.0, 0, K::algebraic}, {0.5, 2, K::algebraic}};
        case SlowIntegral::gauss_integral:
            return {{kSqrtPi / 2.0, 0, K::constant},
                    {-0.5, 1, K::algebraic},
                    {0.25, 3, K::algebraic}};
        case SlowIntegral::gauss_moment2:
            return {{kSqrtPi / 4.0, 0, K::constant},
                    {-0.5, -1, K::algebraic},
                    {-0.25, 1, K::algebraic}};
        case SlowIntegral::gauss_moment4:
            return {{3.0 * kSqrtPi / 8.0, 0, K::constant},
                    {-0.5, -3, K::algebraic},
                    {-0.75, -1, K::algebraic}};
        case SlowIntegral::gauss_moment6:
            return {{15.0 * kSqrtPi / 16.0, 0, K::constant},
                    {-0.5, -5, K::algebraic},
                    {-1.25, -3, K::algebraic}};
        case SlowIntegral::erfi_gauss_integral:
            return {{-1.0, 0, K::log}, {-0.5 * kPsiHalf, 0, K::constant}};
        case SlowIntegral::defect_moment1:
            return {{0.5, 0, K::log}, {0.25 * kPsiMinusHalf, 0, K::constant}};
        case SlowIntegral::defect_moment3:
            return {{-0.25, -2, K::algebraic},
                    {0.75, 0, K::log},
                    {0.375 * kPsiMinus3Half, 0, K::constant}};
        case SlowIntegral::defect_moment5:
            return {{-0.125, -4, K::algebraic},
                    {-0.375, -2, K::algebraic},
                    {1.875, 0, K::log},
                    {0.9375 * kPsiMinus5Half, 0, K::constant}};
    }
    throw std::invalid_argument("slow_table_terms: unknown row");
}

double layer_fn_value(LayerFn fn, double z) {
    switch (fn) {
        case LayerFn::li2_exp:
            return polylog(2, -std::exp(-2.0 * kPi * z));
        case LayerFn::li3_exp:
            return polylog(3, -std::exp(-2.0 * kPi * z));
        case LayerFn::log_exp:
            return std::log1p(std::exp(-2.0 * kPi * z));
        case LayerFn::cosh_pi:
            return std::cosh(kPi * z);
        case LayerFn::sinh_pi:
            return std::sinh(kPi * z);
        case LayerFn::tanh_pi:
            return std::tanh(kPi * z);
        case LayerFn::sech_pi:
            return stable_sech(kPi * z);
        case LayerFn::csch_pi:
            return 1.0 / std::sinh(kPi * z);
        case LayerFn::coth_pi:
            return 1.0 / std::tanh(kPi * z);
    }
    throw std::invalid_argument("layer_fn_value: unknown function");
}

double layer_fn_small_z(LayerFn fn, double z) {
    constexpr double zeta3 = 1.2020569031595942854;
    const double pz = kPi * z;
    switch (fn) {
        case LayerFn::li2_exp:
            return -kPi * kPi / 12.0 + 2.0 * pz * std::log(2.0) - pz * pz + pz * pz * pz / 3.0;
        case LayerFn::li3_exp:
            return -0.75 * zeta3 + kPi * kPi * pz / 6.0 - pz * pz * std::log(4.0) +
                   2.0 * pz * pz * pz / 3.0;
        case LayerFn::log_exp:
            return std::log(2.0) - pz + pz * pz / 2.0;
        case LayerFn::cosh_pi:
            return 1.0 + pz * pz / 2.0;
        case LayerFn::sinh_pi:
            return pz + pz * pz * pz / 6.0;
        case LayerFn::tanh_pi:
            return pz - pz * pz * pz / 3.0;
        case LayerFn::sech_pi:
            return 1.0 - pz * pz / 2.0;
        case LayerFn::csch_pi:
            return 1.0 / pz - pz / 6.0;
        case LayerFn::coth_pi:
            return 1.0 / pz + pz / 3.0;
    }
    throw std::invalid_argument("layer_fn_small_z: unknown function");
}

double layer_fn_large_z(LayerFn fn, double z) {
    const double pz = kPi * z;
    switch (fn) {
        case LayerFn::li2_exp:
        case LayerFn::li3_exp:
            return -std::exp(-2.0 * pz);
        case LayerFn::log_exp:
            return std::exp(-2.0 * pz);
        case LayerFn::cosh_pi:
        case LayerFn::sinh_pi:
            return 0.5 * std::exp(pz);
        case LayerFn::tanh_pi:
        case LayerFn::coth_pi:
            return 1.0;
        case LayerFn::sech_pi:
        case LayerFn::csch_pi:
            return 2.0 * std::exp(-pz);
    }
    throw std::invalid_argument("layer_fn_large_z: unknown function");
}

}  // namespace burgers::special_fn
