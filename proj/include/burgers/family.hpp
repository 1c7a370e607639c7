#pragma once

namespace burgers::family {

// Parameters of the family member W(x,t) = c + W0(x - dx - c t, t; nu).
struct FamilyParams {
    double nu;
    double t;
    double dx = 0.0;
    double c = 0.0;

    double eps() const;  // sqrt(2 nu t)
    bool asymptotic_regime() const { return eps() <= 0.5; }
    void validate() const;  // throws std::invalid_argument unless nu, t > 0
};

// Truncation of the periodic heat-source sum at |n - n0| <= N around the
// dominant image n0.
struct ThetaSum {
    int truncation_N;

    // Smallest N whose first omitted term is below 1e-16 of the retained sum.
    static ThetaSum choose(double x, double nu_t);
};

// Weighted moments of the image sum at a point: with d_n = x + pi - 2 pi n
// and weights exp(-d_n^2 / 4 nu t), E_k is the weighted mean of d_n^k and
// log_sum the log of the bare weight sum.
struct ThetaMoments {
    double E1;
    double E2;
    double E3;
    double log_sum;
    int truncation_N;
};

ThetaMoments theta_moments(double x, double nu_t);
ThetaMoments theta_moments(double x, double nu_t, ThetaSum trunc);

// Heat-kernel superposition psi^W (peaks at +-pi) and its logarithm. The
// dominant Gaussian is factored out before summing, so the log form is exact
// even where psi^W itself would underflow.
double psi_w(double x, const FamilyParams& p);
double log_psi_w(double x, const FamilyParams& p);

// The sawtooth family member W0 = -2 nu psi^W_x / psi^W and its analytic
// x- and t-derivatives.
double w0(double x, const FamilyParams& p);
double w0_x(double x, const FamilyParams& p);
double w0_t(double x, const FamilyParams& p);

double w_family(double x, double time, const FamilyParams& p);

// tanh layer profile (1/t)[x - pi tanh(pi x / 2 nu t)]; valid for nu t <= 0.25
// (throws std::domain_error beyond).
double w0_tanh_profile(double x, const FamilyParams& p);

// sup over a 4096-grid of |w0 - tanh profile|; decays like e^(-1/nu t)/t.
double approximation_error(const FamilyParams& p);

// Conjugation weight T = 1/theta with theta the bare image sum (the constant
// heat-kernel prefactor drops out of the conjugated operator). T is strictly
// positive, even about +-pi, and T * T^-1 = 1 pointwise.
double conjugation_weight(double x, const FamilyParams& p);
double conjugation_weight_inverse(double x, const FamilyParams& p);
double log_conjugation_weight_inverse(double x, const FamilyParams& p);

// Slow-variable forms: w_hat(xi; eps) = (t/eps) W0(eps xi + pi) and
// w_hat_xi = t dxW0(eps xi + pi), functions of (xi, eps) alone.
double w_hat(double xi, double eps);
double w_hat_xi(double xi, double eps);

}  // namespace burgers::family
