#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace burgers {

// Uniform periodic grid on [-pi, pi), node j at -pi + j*2pi/M.
struct Grid {
    int M;

    explicit Grid(int m);

    double h() const;
    double x(int j) const;
    Eigen::ArrayXd nodes() const;
};

double inner_product(const Grid& g, const Eigen::ArrayXd& u, const Eigen::ArrayXd& v);
double l2_norm(const Grid& g, const Eigen::ArrayXd& u);
double mean(const Grid& g, const Eigen::ArrayXd& u);

// Reduce x mod 2pi into [-pi, pi).
double reduce_to_period(double x);

// Trigonometric interpolant of real periodic samples, built by direct DFT
// (O(M^2) setup, O(M) per evaluation; grids here stay <= 4096).
class FourierInterpolant {
public:
    FourierInterpolant(const Grid& g, const Eigen::ArrayXd& values);

    double operator()(double x) const;
    double derivative(double x) const;
    // Primitive of the mean-free part, vanishing at x = 0.
    double antiderivative(double x) const;
    double mean() const { return mean_; }

    // Samples of the interpolant on a finer grid (spectral upsampling).
    Eigen::ArrayXd resample(const Grid& fine) const;

private:
    int M_;
    double mean_;
    // Coefficients for k = 1..M/2; Nyquist entry (k = M/2) holds the real
    // cosine amplitude with its sine part zeroed.
    std::vector<std::complex<double>> coef_;
};

// Spectral derivative of grid samples via the interpolant.
Eigen::ArrayXd spectral_derivative(const Grid& g, const Eigen::ArrayXd& u);

}  // namespace burgers
