#pragma once

#include <vector>

namespace burgers::special_fn {

// One term of a truncated asymptotic expansion. `power` counts powers of the
// expansion variable (1/xi on the slow scale, z on the layer scale).
enum class TermKind { algebraic, log, constant };

struct ExpansionTerm {
    double coefficient;
    int power;
    TermKind kind;
};

// Dawson integral D(x) = e^(-x^2) int_0^x e^(t^2) dt.
// Three regimes: Maclaurin series for |x| <= 1.5, Rybicki's shifted-grid
// sampling for 1.5 < |x| < 7, asymptotic series beyond.
double dawson(double x);

// e^(-x^2) erfi(x) = 2 D(x)/sqrt(pi). Primary form; never overflows.
double scaled_erfi(double x);

// Unscaled erfi. Overflows to +/-inf for x^2 beyond the exponent range;
// callers needing large arguments must use scaled_erfi.
double erfi(double x);

// Li_s(x) for s in {2,3} on x in [-1,0] by direct series summation.
// Throws std::domain_error outside that domain.
double polylog(int s, double x);

// Physicists' Hermite polynomial H_n, 0 <= n <= 8, by recurrence.
double hermite(int n, double x);

// sech(x) without overflow at any finite x.
double stable_sech(double x);

// 1 - tanh(|x|) evaluated as 2e^(-2|x|)/(1+e^(-2|x|)), no cancellation.
double stable_tanh_defect(double x);

// Large-xi expansions of the slow-scale integrals. Row names follow the
// integrand: gauss_momentK is int_0^xi tau^K e^(-tau^2) dtau, defect_momentK
// is int_0^xi tau^K [1 - sqrt(pi) tau e^(-tau^2) erfi(tau)] dtau, and
// erfi_gauss_integral is sqrt(pi) int_0^xi e^(-tau^2) erfi(tau) dtau.
enum class SlowIntegral {
    erfi_row,
    gauss_integral,
    gauss_moment2,
    gauss_moment4,
    gauss_moment6,
    erfi_gauss_integral,
    defect_moment1,
    defect_moment3,
    defect_moment5,
};

// Truncated expansion value at xi (valid regime xi >= 5).
double slow_table_expansion(SlowIntegral row, double xi);

// Magnitude of the first omitted term, for error budgeting.
double slow_table_first_omitted(SlowIntegral row, double xi);

// Structural term list in decreasing significance order. For rows carrying a
// Gaussian or e^(xi^2) prefactor the algebraic terms describe the bracketed
// series multiplying that prefactor.
std::vector<ExpansionTerm> slow_table_terms(SlowIntegral row);

// Layer-profile building blocks: functions of the fast variable with their
// small-z and large-z truncated expansions.
enum class LayerFn {
    li2_exp,    // Li_2(-e^(-2 pi z))
    li3_exp,    // Li_3(-e^(-2 pi z))
    log_exp,    // ln(e^(-2 pi z) + 1)
    cosh_pi,
    sinh_pi,
    tanh_pi,
    sech_pi,
    csch_pi,
    coth_pi,
};

double layer_fn_value(LayerFn fn, double z);
double layer_fn_small_z(LayerFn fn, double z);
double layer_fn_large_z(LayerFn fn, double z);

}  // namespace burgers::special_fn
