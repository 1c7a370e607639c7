#include "burgers/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>
#include <unsupported/Eigen/FFT>

#include "burgers/io.hpp"
#include "burgers/rng.hpp"
#include "burgers/special_functions.hpp"

namespace burgers::spectrum {

namespace {

constexpr double kPi = std::numbers::pi;

void check_matrix_size(int M) {
    if (M < 8 || M % 2 != 0) {
        throw std::invalid_argument("differentiation matrix needs an even M >= 8");
    }
}

Eigen::MatrixXd circulant(int M, const std::vector<double>& kernel) {
    Eigen::MatrixXd D(M, M);
    for (int j = 0; j < M; ++j) {
        for (int k = 0; k < M; ++k) {
            D(j, k) = kernel[(j - k + M) % M];
        }
    }
    return D;
}

int sign_of(double v, double thresh) {
    if (std::abs(v) <= thresh) return 0;
    return v > 0.0 ? 1 : -1;
}

// Flips the vector if needed so the sample of largest magnitude is positive;
// among equal magnitudes the rightmost node wins.
void fix_sign(Eigen::VectorXd& v) {
    int jmax = 0;
    for (int j = 1; j < v.size(); ++j) {
        if (std::abs(v[j]) >= std::abs(v[jmax])) jmax = j;
    }
    if (v[jmax] < 0.0) v = -v;
}

solver::GridFunction continuum_unit(const Grid& g, const Eigen::VectorXd& v) {
    Eigen::ArrayXd a = v.array();
    a /= l2_norm(g, a);
    return {g, a};
}

}  // namespace

Eigen::MatrixXd derivative_matrix(Discretization kind, int M) {
    check_matrix_size(M);
    std::vector<double> kernel(static_cast<std::size_t>(M), 0.0);
    if (kind == Discretization::fourier_pseudospectral) {
        for (int d = 1; d < M; ++d) {
            const double ang = kPi * d / M;
            const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
            kernel[d] = 0.5 * sgn * std::cos(ang) / std::sin(ang);
        }
    } else {
        // kernel[d] multiplies u_{j-d}
        const double h = 2.0 * kPi / M;
        kernel[1] = -8.0 / (12.0 * h);
        kernel[2] = 1.0 / (12.0 * h);
        kernel[M - 1] = 8.0 / (12.0 * h);
        kernel[M - 2] = -1.0 / (12.0 * h);
    }
    return circulant(M, kernel);
}

Eigen::MatrixXd second_derivative_matrix(Discretization kind, int M) {
    check_matrix_size(M);
    std::vector<double> kernel(static_cast<std::size_t>(M), 0.0);
    if (kind == Discretization::fourier_pseudospectral) {
        kernel[0] = -static_cast<double>(M) * M / 12.0 - 1.0 / 6.0;
        for (int d = 1; d < M; ++d) {
            const double s = std::sin(kPi * d / M);
            const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
            kernel[d] = -sgn / (2.0 * s * s);
        }
    } else {
        const double h = 2.0 * kPi / M;
        const double h2 = 12.0 * h * h;
        kernel[0] = -30.0 / h2;
        kernel[1] = 16.0 / h2;
        kernel[2] = -1.0 / h2;
        kernel[M - 1] = 16.0 / h2;
        kernel[M - 2] = -1.0 / h2;
    }
    return circulant(M, kernel);
}

OperatorDiscretization assemble(Discretization kind, int M,
                                const family::FamilyParams& p, Operator which) {
    p.validate();
    if (M < 64 || M % 2 != 0) {
        throw std::invalid_argument("operator grid must be even and at least 64");
    }
    const double eps = p.eps();
    if (M * eps < 8.0 * kPi) {
        throw std::domain_error("grid too coarse for the well scale: M*eps < 8*pi");
    }
    const Grid g(M);
    Eigen::MatrixXd A = p.nu * second_derivative_matrix(kind, M);
    if (which == Operator::L) {
        const Eigen::MatrixXd D1 = derivative_matrix(kind, M);
        Eigen::VectorXd w(M);
        for (int j = 0; j < M; ++j) w[j] = family::w0(g.x(j), p);
        A -= D1 * w.asDiagonal();
    } else {
        for (int j = 0; j < M; ++j) {
            const double x = g.x(j);
            const double w = family::w0(x, p);
            A(j, j) -= 0.5 * (family::w0_x(x, p) + w * w / (2.0 * p.nu));
        }
    }
    return {M, kind, which, p, std::move(A), M * eps * eps >= 8.0 * kPi};
}

Eigen::ArrayXd apply_l(const Grid& g, const family::FamilyParams& p,
                       const Eigen::ArrayXd& u) {
    p.validate();
    if (u.size() != g.M) throw std::invalid_argument("sample count must match the grid");
    const int M = g.M;
    std::vector<std::complex<double>> uin(static_cast<std::size_t>(M));
    std::vector<std::complex<double>> win(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        uin[static_cast<std::size_t>(j)] = u[j];
        win[static_cast<std::size_t>(j)] = family::w0(g.x(j), p) * u[j];
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> uh, wh;
    fft.fwd(uh, uin);
    fft.fwd(wh, win);
    // nu * u'' - (w0 u)': second derivative keeps the Nyquist mode, the first
    // derivative drops it (nodal spectral convention).
    for (int j = 0; j < M; ++j) {
        const int k = (j <= M / 2) ? j : j - M;
        const double ik1 = (j == M / 2) ? 0.0 : static_cast<double>(k);
        const auto idx = static_cast<std::size_t>(j);
        uh[idx] = -p.nu * static_cast<double>(k) * k * uh[idx] -
                  std::complex<double>(0.0, ik1) * wh[idx];
    }
    std::vector<std::complex<double>> outc;
    fft.inv(outc, uh);
    Eigen::ArrayXd out(M);
    for (int j = 0; j < M; ++j) out[j] = outc[static_cast<std::size_t>(j)].real();
    return out;
}

solver::GridFunction zero_mode(const Grid& g, const family::FamilyParams& p) {
    Eigen::ArrayXd lg(g.M);
    for (int j = 0; j < g.M; ++j) lg[j] = -2.0 * family::log_psi_w(g.x(j), p);
    const Eigen::ArrayXd v = (lg - lg.maxCoeff()).exp();
    return {g, v / l2_norm(g, v)};
}

solver::GridFunction tilde_zero_mode(const Grid& g, const family::FamilyParams& p) {
    Eigen::ArrayXd lg(g.M);
    for (int j = 0; j < g.M; ++j) {
        lg[j] = -family::log_conjugation_weight_inverse(g.x(j), p);
    }
    const Eigen::ArrayXd v = (lg - lg.maxCoeff()).exp();
    return {g, v / l2_norm(g, v)};
}

SpectralResult eigenpairs(const OperatorDiscretization& opd, int k) {
    if (k < 1 || k > 10) {
        throw std::invalid_argument("eigenpair count must be between 1 and 10");
    }
    const Grid g(opd.M);
    SpectralResult out;
    out.eigenvalues.resize(k);
    out.residuals.resize(k);
    out.eigenfunctions.reserve(static_cast<std::size_t>(k));
    const Eigen::MatrixXd& A = opd.matrix;

    if (opd.which == Operator::Ltilde) {
        Eigen::VectorXd z = tilde_zero_mode(g, opd.p).values.matrix();
        z /= z.norm();
        const Eigen::VectorXd Az = A * z;
        Eigen::MatrixXd B = A - z * Az.transpose() - Az * z.transpose() +
                            z.dot(Az) * (z * z.transpose());
        B = 0.5 * (B + B.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("symmetric eigensolver did not converge");
        }
        out.analytic_zero_mode = true;
        out.eigenvalues[0] = 0.0;
        out.residuals[0] = Az.norm();
        Eigen::VectorXd zc = z;
        fix_sign(zc);
        out.eigenfunctions.push_back(continuum_unit(g, zc));

        int filled = 1;
        for (int i = opd.M - 1; i >= 0 && filled < k; --i) {
            Eigen::VectorXd v = es.eigenvectors().col(i);
            if (std::abs(z.dot(v)) > 0.5) continue;  // deflation artifact direction
            const double lambda = es.eigenvalues()[i];
            Eigen::VectorXd r = A * v - lambda * v;
            r -= z * z.dot(r);
            fix_sign(v);
            out.eigenvalues[filled] = lambda;
            out.residuals[filled] = r.norm();
            out.eigenfunctions.push_back(continuum_unit(g, v));
            ++filled;
        }
        if (filled < k) {
            throw std::runtime_error("deflated solve produced too few usable eigenpairs");
        }
        return out;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("nonsymmetric eigensolver did not converge");
    }
    std::vector<int> order(static_cast<std::size_t>(opd.M));
    for (int i = 0; i < opd.M; ++i) order[static_cast<std::size_t>(i)] = i;
    const auto& vals = es.eigenvalues();
    std::sort(order.begin(), order.end(),
              [&vals](int a, int b) { return vals[a].real() > vals[b].real(); });
    out.analytic_zero_mode = false;
    for (int i = 0; i < k; ++i) {
        const int idx = order[static_cast<std::size_t>(i)];
        const double lambda = vals[idx].real();
        const Eigen::VectorXd vr = es.eigenvectors().col(idx).real();
        const Eigen::VectorXd vi = es.eigenvectors().col(idx).imag();
        Eigen::VectorXd v = vr.norm() >= vi.norm() ? vr : vi;
        v /= v.norm();
        fix_sign(v);
        out.eigenvalues[i] = lambda;
        out.residuals[i] = (A * v - lambda * v).norm();
        out.eigenfunctions.push_back(continuum_unit(g, v));
    }
    return out;
}

int zero_count(const solver::GridFunction& phi) {
    const int M = phi.grid.M;
    const double thresh = 1e-10 * phi.values.abs().maxCoeff();
    std::vector<int> signs;
    signs.reserve(static_cast<std::size_t>(M));
    for (int j = 0; j < M; ++j) {
        const int s = sign_of(phi.values[j], thresh);
        if (s != 0) signs.push_back(s);
    }
    // Localized eigenfunctions legitimately spend most samples below the
    // band; the count is ambiguous only when almost nothing is left.
    if (signs.size() < 16) {
        throw std::runtime_error("near-zero plateau leaves too few signed samples");
    }
    int count = 0;
    const std::size_t n = signs.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (signs[j] != signs[(j + 1) % n]) ++count;
    }
    return count;
}

LayerMode l_eigenfunction(const family::FamilyParams& p, int M, int n) {
    p.validate();
    if (n < 1 || n > 10) {
        throw std::invalid_argument("mode index must be in 1..10");
    }
    if (M < 64 || M % 2 != 0) {
        throw std::invalid_argument("operator grid needs an even M >= 64");
    }
    const double eps2 = 2.0 * p.nu * p.t;
    if (static_cast<double>(M) * eps2 < 16.0 * kPi) {
        throw std::domain_error("grid too coarse for the layer: M*eps^2 < 16*pi");
    }
    const Grid g(M);
    const double h = g.h();
    Eigen::VectorXd w0v(M);
    for (int j = 0; j < M; ++j) w0v(j) = family::w0(g.x(j), p);
    const double d2c[3] = {-30.0 / (12 * h * h), 16.0 / (12 * h * h), -1.0 / (12 * h * h)};
    const double d1c[2] = {8.0 / (12 * h), -1.0 / (12 * h)};
    const double shift = -static_cast<double>(n) / p.t;
    auto col = [M](int k) { return ((k % M) + M) % M; };
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(M) * 5);
    for (int j = 0; j < M; ++j) {
        trip.emplace_back(j, j, p.nu * d2c[0] - shift);
        trip.emplace_back(j, col(j + 1), p.nu * d2c[1] - d1c[0] * w0v(col(j + 1)));
        trip.emplace_back(j, col(j - 1), p.nu * d2c[1] + d1c[0] * w0v(col(j - 1)));
        trip.emplace_back(j, col(j + 2), p.nu * d2c[2] - d1c[1] * w0v(col(j + 2)));
        trip.emplace_back(j, col(j - 2), p.nu * d2c[2] + d1c[1] * w0v(col(j - 2)));
    }
    Eigen::SparseMatrix<double> A(M, M);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
    if (lu.info() != Eigen::Success) {
        throw std::runtime_error("sparse factorization of the shifted operator failed");
    }
    SplitMix64 rng(100 + static_cast<std::uint64_t>(n));
    Eigen::VectorXd v(M);
    for (int j = 0; j < M; ++j) v(j) = rng.next_uniform();
    v.normalize();
    for (int it = 0; it < 5; ++it) {
        v = lu.solve(v);
        v.normalize();
    }
    Eigen::VectorXd Av = A * v;
    const double lambda = shift + v.dot(Av);
    if ((Av - v.dot(Av) * v).norm() > 1e-6) {
        throw std::runtime_error("inverse iteration did not converge to an eigenpair");
    }
    fix_sign(v);
    return {lambda, continuum_unit(g, v)};
}

solver::GridFunction adjoint_eigenfunction(int n, const SpectralResult& spec,
                                           const family::FamilyParams& p) {
    if (n < 0 || n > 4) {
        throw std::invalid_argument("adjoint eigenfunction index must be in 0..4");
    }
    if (static_cast<std::size_t>(n) >= spec.eigenfunctions.size()) {
        throw std::invalid_argument("spectral result holds too few eigenfunctions");
    }
    const Grid& g = spec.eigenfunctions[static_cast<std::size_t>(n)].grid;
    if (n == 0) {
        Eigen::ArrayXd v = Eigen::ArrayXd::Constant(g.M, 1.0 / std::sqrt(2.0 * kPi));
        return {g, std::move(v)};
    }
    const Eigen::ArrayXd& phit = spec.eigenfunctions[static_cast<std::size_t>(n)].values;
    Eigen::ArrayXd psi(g.M);
    Eigen::ArrayXd phi(g.M);
    for (int j = 0; j < g.M; ++j) {
        const double x = g.x(j);
        psi[j] = family::conjugation_weight_inverse(x, p) * phit[j];
        phi[j] = family::conjugation_weight(x, p) * phit[j];
    }
    const double pairing = inner_product(g, phi, psi);
    if (std::abs(pairing) < 1e-12) {
        throw std::runtime_error("adjoint normalization failed: pairing below 1e-12");
    }
    return {g, psi / pairing};
}

double p_profile(double z) { return special_fn::stable_sech(kPi * z); }

double q_profile(double z) {
    return std::sinh(kPi * z) + kPi * z * special_fn::stable_sech(kPi * z);
}

double p1_profile(double z, double lambda_hat) {
    return lambda_hat / (2.0 * kPi * kPi) * std::cosh(kPi * z) +
           0.5 * z * z * special_fn::stable_sech(kPi * z);
}

namespace {

// Shared tail amplitudes tau_n: both the slow Gaussian and the fast profile
// approach tau_n * A * e^{pi z} at the matching point (A = e^{-pi^2/2 eps^2}).
double tail_amplitude(int n, double eps) {
    switch (n) {
        case 1: return 1.0;
        case 2: return kPi / eps;
        case 3: return -2.0 * kPi * kPi / (eps * eps);
        default: return 2.0 * kPi * kPi * kPi / (eps * eps * eps);
    }
}

double gluing_constant(int n, double eps) {
    const double A = std::exp(-kPi * kPi / (2.0 * eps * eps));
    switch (n) {
        case 1: return -2.0 * kPi * kPi / (eps * eps) * A;
        case 2: return 2.0 * kPi / eps * A;
        case 3: return 4.0 * std::pow(kPi, 4) / (3.0 * std::pow(eps, 4)) * A;
        default: return 4.0 * std::pow(kPi, 3) / std::pow(eps, 3) * A;
    }
}

}  // namespace

double MatchedEigenfunction::slow(double d) const {
    const double xi = (d - kPi) / epsilon;
    const double gauss = std::exp(-0.5 * xi * xi);
    switch (n) {
        case 1: return gauss;
        case 2: return -xi * gauss;
        case 3: return -(2.0 * xi * xi - 1.0) * gauss;
        default: return -xi * (2.0 * xi * xi - 3.0) * gauss;
    }
}

double MatchedEigenfunction::fast(double d) const {
    const double z = d / (epsilon * epsilon);
    if (n % 2 == 1) {
        return C * (p_profile(z) + epsilon * epsilon * p1_profile(z, -2.0 * n));
    }
    return C * q_profile(z);
}

double MatchedEigenfunction::overlap(double d) const {
    const double A = std::exp(-kPi * kPi / (2.0 * epsilon * epsilon));
    return tail_amplitude(n, epsilon) * A * std::exp(kPi * d / (epsilon * epsilon));
}

double MatchedEigenfunction::remainder(double d) const {
    const double e2 = epsilon * epsilon;
    const double z = d / e2;
    const double A = std::exp(-kPi * kPi / (2.0 * e2));
    const double sech = special_fn::stable_sech(kPi * z);
    const double decay = std::exp(-kPi * z);
    switch (n) {
        case 1: return C * (1.0 + 0.5 * e2 * z * z) * sech + A * decay;
        case 2: return kPi / epsilon * A * (2.0 * kPi * z * sech - decay);
        case 3: return C * (1.0 + 0.5 * e2 * z * z) * sech -
                       2.0 * kPi * kPi / e2 * A * decay;
        default: return C * (kPi * z * sech - 0.5 * decay);
    }
}

double MatchedEigenfunction::operator()(double x) const {
    const double y = reduce_to_period(x);
    const double d = y >= 0.0 ? y : y + 2.0 * kPi;
    const double parity = (n % 2 == 1) ? 1.0 : -1.0;
    return slow(d) + remainder(d) + parity * remainder(2.0 * kPi - d);
}

solver::GridFunction MatchedEigenfunction::sample(const Grid& g) const {
    Eigen::ArrayXd v(g.M);
    for (int j = 0; j < g.M; ++j) v[j] = (*this)(g.x(j));
    return {g, std::move(v)};
}

MatchedEigenfunction matched_eigenfunction(int n, double epsilon) {
    if (n < 1 || n > 4) {
        throw std::invalid_argument("matched eigenfunction index must be in 1..4");
    }
    if (!(epsilon > 0.0) || epsilon > 0.25) {
        throw std::domain_error("matched eigenfunction requires 0 < eps <= 0.25");
    }
    return {n, epsilon, gluing_constant(n, epsilon)};
}

std::vector<PredictedEigenvalue> predicted_eigenvalues(double epsilon, double t) {
    if (!(epsilon > 0.0) || epsilon > 0.5) {
        throw std::domain_error("predicted eigenvalues require 0 < eps <= 0.5");
    }
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    const double e1 = std::exp(-1.0 / (epsilon * epsilon));
    const double bars[5] = {0.0, std::sqrt(epsilon) * e1,
                            e1 / (epsilon * epsilon),
                            e1 / std::pow(epsilon, 3.5),
                            e1 / std::pow(epsilon, 6)};
    std::vector<PredictedEigenvalue> out;
    out.reserve(5);
    for (int n = 0; n < 5; ++n) out.push_back({-n / t, bars[n]});
    return out;
}

double matching_residual(int n, double lambda, double epsilon, double t) {
    if (n < 1 || n > 4) {
        throw std::invalid_argument("matching residual index must be in 1..4");
    }
    if (!(epsilon > 0.0) || epsilon > 0.5) {
        throw std::domain_error("matching residual requires 0 < eps <= 0.5");
    }
    if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
    static const double kappa[4] = {std::sqrt(kPi) / 4.0, std::sqrt(kPi) / 8.0,
                                    std::sqrt(kPi) / 8.0,
                                    3.0 * std::sqrt(kPi) / 16.0};
    const double xi0 = kPi / epsilon - std::sqrt(epsilon);
    const double big_lambda = 2.0 * t * lambda + 2.0 * n;
    return -2.0 * kPi * kappa[n - 1] * big_lambda / std::pow(xi0, 2 * n - 1);
}

void export_spectrum(const std::filesystem::path& path, const SpectralResult& spec) {
    const auto k = static_cast<int>(spec.eigenfunctions.size());
    Eigen::ArrayXd idx(k), lam(k), res(k), zc(k);
    for (int i = 0; i < k; ++i) {
        idx[i] = i;
        lam[i] = spec.eigenvalues[i];
        res[i] = spec.residuals[i];
        try {
            zc[i] = zero_count(spec.eigenfunctions[static_cast<std::size_t>(i)]);
        } catch (const std::runtime_error&) {
            zc[i] = -1;  // plateau ambiguity
        }
    }
    io::write_csv(path,
                  {{"n", &idx}, {"lambda", &lam}, {"residual", &res}, {"zero_count", &zc}},
                  0);
}

void export_eigenfunctions(const std::filesystem::path& path, const Grid& g,
                           const SpectralResult& spec) {
    const Eigen::ArrayXd xs = g.nodes();
    std::vector<io::CsvColumn> cols;
    std::vector<std::string> names;
    cols.reserve(spec.eigenfunctions.size() + 1);
    names.reserve(spec.eigenfunctions.size());
    cols.push_back({"x", &xs});
    for (std::size_t i = 0; i < spec.eigenfunctions.size(); ++i) {
        names.push_back("phi" + std::to_string(i));
        cols.push_back({names.back(), &spec.eigenfunctions[i].values});
    }
    io::write_csv(path, cols, 0);
}

}  // namespace burgers::spectrum
