#include "burgers/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace burgers {

namespace {
constexpr double kPi = std::numbers::pi;
}

Grid::Grid(int m) : M(m) {
    if (m < 16 || m % 2 != 0) throw std::invalid_argument("Grid: M must be even and >= 16");
}

double Grid::h() const { return 2.0 * kPi / M; }

double Grid::x(int j) const { return -kPi + j * h(); }

Eigen::ArrayXd Grid::nodes() const {
    Eigen::ArrayXd xs(M);
    for (int j = 0; j < M; ++j) xs[j] = x(j);
    return xs;
}

double inner_product(const Grid& g, const Eigen::ArrayXd& u, const Eigen::ArrayXd& v) {
    return g.h() * (u * v).sum();
}

double l2_norm(const Grid& g, const Eigen::ArrayXd& u) {
    return std::sqrt(g.h() * (u * u).sum());
}

double mean(const Grid& g, const Eigen::ArrayXd& u) { return u.sum() / g.M; }

double reduce_to_period(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r >= kPi) r -= 2.0 * kPi;
    return r;
}

FourierInterpolant::FourierInterpolant(const Grid& g, const Eigen::ArrayXd& values)
    : M_(g.M), mean_(values.sum() / g.M), coef_(g.M / 2) {
    const int half = M_ / 2;
    for (int k = 1; k <= half; ++k) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < M_; ++j) {
            const double ph = k * g.x(j);
            a += values[j] * std::cos(ph);
            b += values[j] * std::sin(ph);
        }
        const double w = (k == half) ? 1.0 / M_ : 2.0 / M_;
        coef_[k - 1] = {w * a, w * b};
    }
}

double FourierInterpolant::operator()(double x) const {
    double s = mean_;
    const std::complex<double> rot = std::polar(1.0, x);
    std::complex<double> ph = rot;  // e^{ikx}, advanced by one rotation per mode
    for (int k = 1; k <= M_ / 2; ++k) {
        const auto& c = coef_[k - 1];
        s += c.real() * ph.real() + c.imag() * ph.imag();
        ph *= rot;
        if ((k & 255) == 0) ph /= std::abs(ph);
    }
    return s;
}

double FourierInterpolant::derivative(double x) const {
    double s = 0.0;
    const std::complex<double> rot = std::polar(1.0, x);
    std::complex<double> ph = rot;
    for (int k = 1; k <= M_ / 2; ++k) {
        const auto& c = coef_[k - 1];
        s += k * (c.imag() * ph.real() - c.real() * ph.imag());
        ph *= rot;
        if ((k & 255) == 0) ph /= std::abs(ph);
    }
    return s;
}

double FourierInterpolant::antiderivative(double x) const {
    double s = 0.0;
    const std::complex<double> rot = std::polar(1.0, x);
    std::complex<double> ph = rot;
    for (int k = 1; k <= M_ / 2; ++k) {
        const auto& c = coef_[k - 1];
        s += (c.real() * ph.imag() - c.imag() * (ph.real() - 1.0)) / k;
        ph *= rot;
        if ((k & 255) == 0) ph /= std::abs(ph);
    }
    return s;
}

Eigen::ArrayXd FourierInterpolant::resample(const Grid& fine) const {
    Eigen::ArrayXd out(fine.M);
    for (int j = 0; j < fine.M; ++j) out[j] = (*this)(fine.x(j));
    return out;
}

Eigen::ArrayXd spectral_derivative(const Grid& g, const Eigen::ArrayXd& u) {
    FourierInterpolant f(g, u);
    Eigen::ArrayXd out(g.M);
    for (int j = 0; j < g.M; ++j) out[j] = f.derivative(g.x(j));
    return out;
}

}  // namespace burgers
