#pragma once

#include "burgers/grid.hpp"
#include "burgers/solver.hpp"

namespace burgers::cole_hopf {

// Periodic initial-value problem split into a zero-mean profile and its mean.
struct CHProblem {
    solver::GridFunction u0;
    double c = 0.0;
    double nu = 0.0;

    void validate() const;  // throws std::invalid_argument
};

CHProblem make_problem(const solver::GridFunction& u, double nu);

// F(x) = -int_0^x u0(s) ds, periodic for zero-mean data, F(0) = 0.
class Antiderivative {
public:
    explicit Antiderivative(const solver::GridFunction& u0);

    double operator()(double x) const { return -interp_.antiderivative(x); }

private:
    FourierInterpolant interp_;
};

// Exact solution via heat-kernel quadrature of the transformed problem. The
// interpolated antiderivative and the refined argmax y0 are built once.
class CHSolution {
public:
    explicit CHSolution(CHProblem prob);

    // u^CH(x, t); throws std::invalid_argument for t <= 0 and
    // std::runtime_error when the exponent max cannot be bracketed.
    double operator()(double x, double t) const;

    // (1/t)[s - pi tanh(pi s / 2 nu t)] + c with s = x - y0 - pi reduced
    // mod 2pi.
    double laplace_profile(double x, double t) const;

    double y0() const { return y0_; }
    const CHProblem& problem() const { return prob_; }

private:
    CHProblem prob_;
    Antiderivative F_;
    double f_range_;
    double y0_;
};

// Single-call forms of the operations above; each builds a CHSolution.
double ch_solution(const CHProblem& prob, double x, double t);
double laplace_profile(const CHProblem& prob, double x, double t);

}  // namespace burgers::cole_hopf
