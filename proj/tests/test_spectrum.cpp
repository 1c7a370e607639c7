#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "burgers/family.hpp"
#include "burgers/grid.hpp"
#include "burgers/rng.hpp"
#include "burgers/spectrum.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"

using namespace burgers;
namespace sp = burgers::spectrum;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::ArrayXd sampled(const Grid& g, double (*f)(double)) {
    Eigen::ArrayXd v(g.M);
    for (int j = 0; j < g.M; ++j) v[j] = f(g.x(j));
    return v;
}

// Random trig polynomial of degree <= 10; the conjugation identity only
// holds discretely on functions whose spectrum the grid resolves.
Eigen::ArrayXd trig_polynomial(const Grid& g, SplitMix64& rng) {
    const double a0 = rng.next_uniform();
    double ak[10], bk[10];
    for (int k = 0; k < 10; ++k) {
        ak[k] = rng.next_uniform();
        bk[k] = rng.next_uniform();
    }
    Eigen::ArrayXd v(g.M);
    for (int j = 0; j < g.M; ++j) {
        const double x = g.x(j);
        double s = a0;
        for (int k = 1; k <= 10; ++k) {
            s += ak[k - 1] * std::cos(k * x) + bk[k - 1] * std::sin(k * x);
        }
        v[j] = s;
    }
    return v;
}

double fd_second(double (*f)(double, double), double z, double par) {
    const double h = 1e-3;
    return (-f(z + 2 * h, par) + 16 * f(z + h, par) - 30 * f(z, par) +
            16 * f(z - h, par) - f(z - 2 * h, par)) /
           (12 * h * h);
}

}  // namespace

TEST_CASE("spectral differentiation matrices are exact on resolved modes") {
    const int M = 64;
    const Grid g(M);
    const Eigen::MatrixXd D1 = sp::derivative_matrix(sp::Discretization::fourier_pseudospectral, M);
    const Eigen::MatrixXd D2 =
        sp::second_derivative_matrix(sp::Discretization::fourier_pseudospectral, M);

    const Eigen::ArrayXd s3 = sampled(g, [](double x) { return std::sin(3.0 * x); });
    const Eigen::ArrayXd c3 = sampled(g, [](double x) { return std::cos(3.0 * x); });
    CHECK((D1 * s3.matrix() - 3.0 * c3.matrix()).cwiseAbs().maxCoeff() < 1e-11);

    const Eigen::ArrayXd c5 = sampled(g, [](double x) { return std::cos(5.0 * x); });
    CHECK((D2 * c5.matrix() + 25.0 * c5.matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("finite difference matrices converge at 4th order") {
    double err1[2], err2[2];
    int idx = 0;
    for (int M : {64, 128}) {
        const Grid g(M);
        const Eigen::MatrixXd D1 =
            sp::derivative_matrix(sp::Discretization::finite_difference_4th, M);
        const Eigen::MatrixXd D2 =
            sp::second_derivative_matrix(sp::Discretization::finite_difference_4th, M);
        const Eigen::ArrayXd s = sampled(g, [](double x) { return std::sin(x); });
        const Eigen::ArrayXd c = sampled(g, [](double x) { return std::cos(x); });
        err1[idx] = (D1 * s.matrix() - c.matrix()).cwiseAbs().maxCoeff();
        err2[idx] = (D2 * c.matrix() + c.matrix()).cwiseAbs().maxCoeff();
        ++idx;
    }
    // centered 4th-order truncation constants: h^4 f^(5)/30 and h^4 f^(6)/90
    CHECK(err1[0] < 4e-6);
    CHECK(err2[0] < 2e-6);
    CHECK(err1[0] / err1[1] == doctest::Approx(16.0).epsilon(0.05));
    CHECK(err2[0] / err2[1] == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("assemble validates the grid and flags layer resolution") {
    const family::FamilyParams p{0.001, 5.0, 0.0};  // eps = 0.1
    CHECK_THROWS_AS(sp::assemble(sp::Discretization::fourier_pseudospectral, 63, p,
                                 sp::Operator::Ltilde),
                    std::invalid_argument);
    CHECK_THROWS_AS(sp::assemble(sp::Discretization::fourier_pseudospectral, 32, p,
                                 sp::Operator::Ltilde),
                    std::invalid_argument);
    // M*eps = 6.4 < 8*pi: the wells themselves are unresolved
    CHECK_THROWS_AS(sp::assemble(sp::Discretization::fourier_pseudospectral, 64, p,
                                 sp::Operator::Ltilde),
                    std::domain_error);

    const auto coarse = sp::assemble(sp::Discretization::fourier_pseudospectral, 512, p,
                                     sp::Operator::Ltilde);
    CHECK_FALSE(coarse.resolves_fast_scale);  // M*eps^2 = 5.12 < 8*pi

    const family::FamilyParams q{0.05, 2.0, 0.0};  // eps^2 = 0.2
    const auto fine = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, q,
                                   sp::Operator::Ltilde);
    CHECK(fine.resolves_fast_scale);
    CHECK(fine.M == 256);
}

TEST_CASE("conjugated operator is symmetric and the bare one conserves mass") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                 sp::Operator::Ltilde);
    const double defect = (Lt.matrix - Lt.matrix.transpose()).norm() / Lt.matrix.norm();
    CHECK(defect < 1e-10);

    const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                sp::Operator::L);
    const Eigen::VectorXd colsum = L.matrix.colwise().sum();
    CHECK(colsum.norm() < 1e-8 * L.matrix.norm());
}

TEST_CASE("eigenvalues land on -n/t across discretizations and grids") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const auto Lt512 = sp::assemble(sp::Discretization::fourier_pseudospectral, 512, p,
                                    sp::Operator::Ltilde);
    const auto spec = sp::eigenpairs(Lt512, 8);

    CHECK(spec.analytic_zero_mode);
    CHECK(spec.eigenvalues[0] == 0.0);
    CHECK(spec.residuals[0] < 1e-6);
    const Grid g(512);
    for (int n = 1; n < 8; ++n) {
        CHECK(std::abs(spec.eigenvalues[n] * p.t + n) < 1e-9);
        CHECK(spec.residuals[n] < 1e-9);
        CHECK(l2_norm(g, spec.eigenfunctions[static_cast<std::size_t>(n)].values) ==
              doctest::Approx(1.0).epsilon(1e-12));
        int am = 0;
        spec.eigenfunctions[static_cast<std::size_t>(n)].values.abs().maxCoeff(&am);
        CHECK(spec.eigenfunctions[static_cast<std::size_t>(n)].values[am] > 0.0);
    }

    const auto Lt256 = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                    sp::Operator::Ltilde);
    const auto spec256 = sp::eigenpairs(Lt256, 5);
    for (int n = 0; n < 5; ++n) {
        CHECK(std::abs(spec256.eigenvalues[n] - spec.eigenvalues[n]) < 1e-6);
    }

    const auto fd = sp::assemble(sp::Discretization::finite_difference_4th, 256, p,
                                 sp::Operator::Ltilde);
    const auto fdspec = sp::eigenpairs(fd, 5);
    for (int n = 0; n < 5; ++n) {
        CHECK(std::abs(fdspec.eigenvalues[n] - spec.eigenvalues[n]) < 1e-4);
    }

    const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                sp::Operator::L);
    const auto lspec = sp::eigenpairs(L, 5);
    CHECK_FALSE(lspec.analytic_zero_mode);
    for (int n = 0; n < 5; ++n) {
        CHECK(std::abs(lspec.eigenvalues[n] - spec.eigenvalues[n]) < 1e-8);
    }

    CHECK_THROWS_AS(sp::eigenpairs(Lt256, 0), std::invalid_argument);
    CHECK_THROWS_AS(sp::eigenpairs(Lt256, 11), std::invalid_argument);
}

TEST_CASE("eigenvalues stay accurate before the layer spike is representable") {
    const family::FamilyParams p{0.001, 5.0, 0.0};  // eps = 0.1
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 1024, p,
                                 sp::Operator::Ltilde);
    CHECK_FALSE(Lt.resolves_fast_scale);
    const auto spec = sp::eigenpairs(Lt, 5);
    for (int n = 1; n < 5; ++n) {
        CHECK(std::abs(spec.eigenvalues[n] * p.t + n) < 1e-6);
    }
    // the zero-mode residual honestly reports that 1/theta is unresolved
    CHECK(spec.residuals[0] > 1e-2);
}

TEST_CASE("zero_count reads the sign structure and rejects ambiguous plateaus") {
    const Grid g(256);
    CHECK(sp::zero_count({g, sampled(g, [](double x) { return std::sin(4.0 * x); })}) == 8);
    CHECK(sp::zero_count({g, Eigen::ArrayXd::Constant(256, 0.7)}) == 0);

    Eigen::ArrayXd spike = Eigen::ArrayXd::Zero(256);
    for (int j = 0; j < 10; ++j) spike[j] = 1.0;
    CHECK_THROWS_AS(sp::zero_count({g, spike}), std::runtime_error);
    for (int j = 10; j < 16; ++j) spike[j] = 1.0;
    CHECK(sp::zero_count({g, spike}) == 0);
}

TEST_CASE("mode zero counts follow the oscillation ladder at moderate eps") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 512, p,
                                 sp::Operator::Ltilde);
    const auto spec = sp::eigenpairs(Lt, 8);
    const int expected[8] = {0, 2, 2, 4, 4, 6, 6, 8};
    for (int n = 0; n < 8; ++n) {
        CHECK(sp::zero_count(spec.eigenfunctions[static_cast<std::size_t>(n)]) == expected[n]);
    }
}

TEST_CASE("sharp-regime eigenfunctions of L keep 2,2,4,4 sign changes") {
    struct Setting {
        double eps;
        int M;
    };
    const Setting settings[] = {{0.15, 8192}, {0.1, 16384}};
    const int expected[4] = {2, 2, 4, 4};
    for (const auto& s : settings) {
        const double t = 5.0;
        const family::FamilyParams p{s.eps * s.eps / (2.0 * t), t, 0.0};
        for (int n = 1; n <= 4; ++n) {
            const auto lm = sp::l_eigenfunction(p, s.M, n);
            CHECK(std::abs(lm.lambda * t + n) < 1e-8);
            CHECK(sp::zero_count(lm.phi) == expected[n - 1]);
        }
    }
    CHECK_THROWS_AS(sp::l_eigenfunction(family::FamilyParams{0.001, 5.0, 0.0}, 1024, 1),
                    std::domain_error);
    CHECK_THROWS_AS(sp::l_eigenfunction(family::FamilyParams{0.05, 2.0, 0.0}, 4096, 0),
                    std::invalid_argument);
}

TEST_CASE("analytic zero modes are annihilated by the discretized operators") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const Grid g(1024);
    const auto phi0 = sp::zero_mode(g, p);
    CHECK(l2_norm(g, phi0.values) == doctest::Approx(1.0).epsilon(1e-12));
    const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, 1024, p,
                                sp::Operator::L);
    CHECK((L.matrix * phi0.values.matrix()).norm() / phi0.values.matrix().norm() < 1e-8);

    const auto tz = sp::tilde_zero_mode(g, p);
    CHECK(l2_norm(g, tz.values) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tz.values.minCoeff() > 0.0);
}

TEST_CASE("matrix-free application reproduces the dense operator") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const Grid g(256);
    const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                sp::Operator::L);
    Eigen::ArrayXd u(256);
    for (int j = 0; j < 256; ++j) {
        u[j] = std::sin(3.0 * g.x(j)) + 0.4 * std::cos(7.0 * g.x(j));
    }
    const Eigen::VectorXd dense = L.matrix * u.matrix();
    const Eigen::ArrayXd fast = sp::apply_l(g, p, u);
    CHECK((fast.matrix() - dense).norm() / dense.norm() < 1e-11);
}

TEST_CASE("zero mode survives the matrix-free operator on sharp-layer grids") {
    struct Setting {
        double nu, t;
        int M;
    };
    const Setting settings[] = {{0.05, 1.0, 2048}, {0.01, 5.0, 2048}, {0.001, 5.0, 16384}};
    for (const auto& s : settings) {
        const family::FamilyParams p{s.nu, s.t, 0.0};
        const Grid g(s.M);
        const auto phi0 = sp::zero_mode(g, p);
        const Eigen::ArrayXd r = sp::apply_l(g, p, phi0.values);
        CHECK(l2_norm(g, r) / l2_norm(g, phi0.values) < 1e-8);
    }
}

TEST_CASE("conjugation by theta maps L onto the symmetric operator") {
    struct Setting {
        double nu, t;
        int M;
    };
    const Setting settings[] = {{0.2, 2.0, 256}, {0.1, 2.0, 512}};
    for (const auto& s : settings) {
        const family::FamilyParams p{s.nu, s.t, 0.0};
        const Grid g(s.M);
        const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, s.M, p,
                                    sp::Operator::L);
        const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, s.M, p,
                                     sp::Operator::Ltilde);
        Eigen::VectorXd theta(s.M), theta_inv(s.M);
        for (int j = 0; j < s.M; ++j) {
            const double w = family::conjugation_weight(g.x(j), p);
            theta_inv(j) = w;
            theta(j) = 1.0 / w;
        }
        SplitMix64 rng(11);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd v = trig_polynomial(g, rng).matrix();
            const Eigen::VectorXd lhs =
                theta.asDiagonal() * (L.matrix * (theta_inv.asDiagonal() * v));
            const double rel = (lhs - Lt.matrix * v).norm() / v.norm();
            if (rel > worst) worst = rel;
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("conjugation identity needs resolved vectors, not white noise") {
    const family::FamilyParams p{0.2, 2.0, 0.0};
    const Grid g(256);
    const auto L = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                sp::Operator::L);
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                 sp::Operator::Ltilde);
    Eigen::VectorXd theta(256), theta_inv(256);
    for (int j = 0; j < 256; ++j) {
        const double w = family::conjugation_weight(g.x(j), p);
        theta_inv(j) = w;
        theta(j) = 1.0 / w;
    }
    SplitMix64 rng(11);
    Eigen::VectorXd v(256);
    for (int j = 0; j < 256; ++j) v(j) = rng.next_uniform();
    const Eigen::VectorXd lhs = theta.asDiagonal() * (L.matrix * (theta_inv.asDiagonal() * v));
    CHECK((lhs - Lt.matrix * v).norm() / v.norm() > 1.0);
}

TEST_CASE("adjoint family is biorthogonal to the untransformed eigenfunctions") {
    const family::FamilyParams p{0.05, 2.0, 0.0};
    const Grid g(512);
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 512, p,
                                 sp::Operator::Ltilde);
    const auto spec = sp::eigenpairs(Lt, 5);
    Eigen::ArrayXd theta(512);
    for (int j = 0; j < 512; ++j) theta[j] = 1.0 / family::conjugation_weight(g.x(j), p);

    const auto psi0 = sp::adjoint_eigenfunction(0, spec, p);
    const double c = psi0.values[0];
    CHECK(c == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-14));
    CHECK((psi0.values - c).abs().maxCoeff() == 0.0);

    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(512);
    CHECK(inner_product(g, ones, psi0.values) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-13));
    // the n=1 mass moment stays order one; only even modes decouple from the mean
    const auto psi1 = sp::adjoint_eigenfunction(1, spec, p);
    CHECK(inner_product(g, ones, psi1.values) ==
          doctest::Approx(0.890317617213769).epsilon(1e-6));
    const auto psi2 = sp::adjoint_eigenfunction(2, spec, p);
    CHECK(std::abs(inner_product(g, ones, psi2.values)) < 1e-8);

    for (int m = 1; m <= 4; ++m) {
        const Eigen::ArrayXd phi_m =
            spec.eigenfunctions[static_cast<std::size_t>(m)].values / theta;
        for (int n = 1; n <= 4; ++n) {
            const auto psi = sp::adjoint_eigenfunction(n, spec, p);
            const double ip = inner_product(g, phi_m, psi.values);
            CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-10);
        }
    }
    CHECK_THROWS_AS(sp::adjoint_eigenfunction(5, spec, p), std::invalid_argument);
}

TEST_CASE("biorthogonality including the constant adjoint row") {
    const family::FamilyParams p{0.2, 2.0, 0.0};
    const Grid g(256);
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                 sp::Operator::Ltilde);
    const auto spec = sp::eigenpairs(Lt, 3);
    Eigen::ArrayXd theta(256);
    for (int j = 0; j < 256; ++j) theta[j] = 1.0 / family::conjugation_weight(g.x(j), p);

    std::vector<Eigen::ArrayXd> phis, psis;
    const auto psi0 = sp::adjoint_eigenfunction(0, spec, p);
    Eigen::ArrayXd phi0 = sp::zero_mode(g, p).values;
    phi0 /= inner_product(g, phi0, psi0.values);  // fixes the free constant in C/psi^2
    phis.push_back(phi0);
    psis.push_back(psi0.values);
    for (int n = 1; n <= 2; ++n) {
        phis.push_back(spec.eigenfunctions[static_cast<std::size_t>(n)].values / theta);
        psis.push_back(sp::adjoint_eigenfunction(n, spec, p).values);
    }
    for (int m = 0; m <= 2; ++m) {
        for (int n = 0; n <= 2; ++n) {
            const double ip = inner_product(g, phis[static_cast<std::size_t>(m)],
                                            psis[static_cast<std::size_t>(n)]);
            CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-7);
        }
    }
}

TEST_CASE("layer profiles solve the fast-scale equation") {
    auto lfast = [](double (*f)(double), double z) {
        const double h = 1e-3;
        const double d2 = (-f(z + 2 * h) + 16 * f(z + h) - 30 * f(z) + 16 * f(z - h) -
                           f(z - 2 * h)) /
                          (12 * h * h);
        const double sech = 1.0 / std::cosh(kPi * z);
        return d2 + kPi * kPi * (2.0 * sech * sech - 1.0) * f(z);
    };
    for (double z : {-1.3, -0.6, 0.0, 0.4, 1.1}) {
        CHECK(std::abs(lfast(sp::p_profile, z)) < 1e-8);
        CHECK(std::abs(lfast(sp::q_profile, z)) < 1e-7);
    }
    // Wronskian of the decaying and growing kernel elements
    for (double z : {-0.8, 0.1, 0.9}) {
        const double h = 1e-4;
        const double pd = (sp::p_profile(z + h) - sp::p_profile(z - h)) / (2 * h);
        const double qd = (sp::q_profile(z + h) - sp::q_profile(z - h)) / (2 * h);
        CHECK(sp::p_profile(z) * qd - pd * sp::q_profile(z) ==
              doctest::Approx(2.0 * kPi).epsilon(1e-7));
    }
    CHECK(sp::p_profile(0.0) == 1.0);
    CHECK(sp::q_profile(0.0) == 0.0);
}

TEST_CASE("first correction carries the eigenvalue forcing") {
    // L_fast P1 = (1 + lh) sech(pi z) - 2 pi z sech(pi z) tanh(pi z)
    const double lh = -2.0;
    for (double z : {-1.2, -0.4, 0.3, 0.9}) {
        const double d2 = fd_second(sp::p1_profile, z, lh);
        const double sech = 1.0 / std::cosh(kPi * z);
        const double tanh = std::tanh(kPi * z);
        const double lhs = d2 + kPi * kPi * (2.0 * sech * sech - 1.0) * sp::p1_profile(z, lh);
        const double rhs = (1.0 + lh) * sech - 2.0 * kPi * z * sech * tanh;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("matched eigenfunctions agree with the computed modes") {
    const double t = 2.0;
    for (double eps : {0.12, 0.15, 0.2}) {
        const family::FamilyParams p{eps * eps / (2.0 * t), t, 0.0};
        const Grid g(2048);
        const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 2048, p,
                                     sp::Operator::Ltilde);
        const auto spec = sp::eigenpairs(Lt, 5);
        for (int n = 1; n <= 4; ++n) {
            const auto me = sp::matched_eigenfunction(n, eps);
            const auto smp = me.sample(g);
            Eigen::ArrayXd approx = smp.values / l2_norm(g, smp.values);
            Eigen::ArrayXd comp = spec.eigenfunctions[static_cast<std::size_t>(n)].values;
            if ((approx - comp).matrix().norm() > (approx + comp).matrix().norm()) {
                comp = -comp;
            }
            const double dist = l2_norm(g, approx - comp);
            CHECK(dist < 1e-9);
            CHECK(dist < 0.05);
        }
    }
}

TEST_CASE("matched composite parity matches mode index") {
    const auto sample_pair = [](const sp::MatchedEigenfunction& me, double x) {
        return std::pair<double, double>{me(x), me(-x)};
    };
    for (int n = 1; n <= 4; ++n) {
        const auto me = sp::matched_eigenfunction(n, 0.2);
        const double parity = (n % 2 == 1) ? 1.0 : -1.0;
        for (double x : {0.6, 1.7, 2.9}) {
            const auto [a, b] = sample_pair(me, x);
            CHECK(a == doctest::Approx(parity * b).epsilon(1e-12));
        }
    }
}

TEST_CASE("remainder form of the fast core is cancellation-free") {
    // eps large enough that exp(-pi^2/(2 eps^2)) is a normal double
    const double eps = 0.25;
    for (int n = 1; n <= 4; ++n) {
        const auto me = sp::matched_eigenfunction(n, eps);
        for (double d : {0.4, 0.9, 1.6, 2.4}) {
            const double direct = me.fast(d) - me.overlap(d);
            const double stable = me.remainder(d);
            if (std::abs(stable) > 0.0) {
                CHECK(direct == doctest::Approx(stable).epsilon(1e-9));
            }
        }
        // composite assembles exactly from its published pieces
        for (double x : {0.3, -1.2, 2.2}) {
            const double d = x >= 0 ? x : x + 2.0 * kPi;
            const double parity = (n % 2 == 1) ? 1.0 : -1.0;
            const double manual = me.slow(d) + me.remainder(d) +
                                  parity * me.remainder(2.0 * kPi - d);
            CHECK(me(x) == doctest::Approx(manual).epsilon(1e-12));
        }
    }
}

TEST_CASE("gluing constants keep their ratios and signs") {
    const double eps = 0.2;
    const auto m1 = sp::matched_eigenfunction(1, eps);
    const auto m2 = sp::matched_eigenfunction(2, eps);
    const auto m3 = sp::matched_eigenfunction(3, eps);
    const auto m4 = sp::matched_eigenfunction(4, eps);
    CHECK(m1.C < 0.0);
    CHECK(m2.C > 0.0);
    CHECK(m3.C > 0.0);
    CHECK(m4.C > 0.0);
    // C3/|C1| = 2 pi^2/(3 eps^2), C4/C2 = 2 pi^2/eps^2
    CHECK(m3.C / std::abs(m1.C) ==
          doctest::Approx(2.0 * kPi * kPi / (3.0 * eps * eps)).epsilon(1e-12));
    CHECK(m4.C / m2.C == doctest::Approx(2.0 * kPi * kPi / (eps * eps)).epsilon(1e-12));

    CHECK_THROWS_AS(sp::matched_eigenfunction(0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(sp::matched_eigenfunction(5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(sp::matched_eigenfunction(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(sp::matched_eigenfunction(1, 0.26), std::domain_error);
}

TEST_CASE("predicted eigenvalues carry exponentially small bars") {
    const auto pred = sp::predicted_eigenvalues(0.3, 2.0);
    REQUIRE(pred.size() == 5);
    for (int n = 0; n < 5; ++n) {
        CHECK(pred[static_cast<std::size_t>(n)].lambda == -0.5 * n);
    }
    CHECK(pred[0].bar == 0.0);
    CHECK(pred[1].bar == doctest::Approx(8.186e-6).epsilon(1e-3));
    for (int n = 2; n < 5; ++n) {
        CHECK(pred[static_cast<std::size_t>(n)].bar >
              pred[static_cast<std::size_t>(n - 1)].bar);
    }
    CHECK_THROWS_AS(sp::predicted_eigenvalues(0.55, 2.0), std::domain_error);
    CHECK_THROWS_AS(sp::predicted_eigenvalues(0.3, 0.0), std::invalid_argument);
}

TEST_CASE("matching residual vanishes only at the predicted eigenvalue") {
    const double t = 2.0;
    for (double eps : {0.15, 0.2}) {
        for (int n = 1; n <= 4; ++n) {
            const double lam = -static_cast<double>(n) / t;
            CHECK(sp::matching_residual(n, lam, eps, t) == 0.0);
            const double above = sp::matching_residual(n, lam + 0.05, eps, t);
            const double below = sp::matching_residual(n, lam - 0.05, eps, t);
            CHECK(above < 0.0);
            CHECK(below > 0.0);
        }
    }
    // hand-computed magnitudes at eps = 0.15, offset +0.05
    CHECK(sp::matching_residual(1, -0.5 + 0.05, 0.15, t) ==
          doctest::Approx(-2.7087e-2).epsilon(1e-3));
    CHECK(sp::matching_residual(2, -1.0 + 0.05, 0.15, t) ==
          doctest::Approx(-3.205e-5).epsilon(1e-3));
    CHECK_THROWS_AS(sp::matching_residual(0, -0.5, 0.15, t), std::invalid_argument);
}

TEST_CASE("spectrum exports round-trip through the CSV layout") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "burgers_spectrum_test";
    fs::remove_all(dir);

    const family::FamilyParams p{0.05, 2.0, 0.0};
    const Grid g(256);
    const auto Lt = sp::assemble(sp::Discretization::fourier_pseudospectral, 256, p,
                                 sp::Operator::Ltilde);
    const auto spec = sp::eigenpairs(Lt, 3);

    sp::export_spectrum(dir / "spectrum.csv", spec);
    std::ifstream in(dir / "spectrum.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,lambda,residual,zero_count");
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    {
        std::stringstream ss(rows[1]);
        std::string field;
        std::getline(ss, field, ',');
        CHECK(field == "1");
        std::getline(ss, field, ',');
        CHECK(std::stod(field) == doctest::Approx(-0.5).epsilon(1e-9));
        std::getline(ss, field, ',');
        std::getline(ss, field, ',');
        CHECK(field == "2");
    }

    sp::export_eigenfunctions(dir / "modes.csv", g, spec);
    std::ifstream in2(dir / "modes.csv");
    std::getline(in2, header);
    CHECK(header == "x,phi0,phi1,phi2");
    int count = 0;
    for (std::string line; std::getline(in2, line);) ++count;
    CHECK(count == 256);
    fs::remove_all(dir);
}
