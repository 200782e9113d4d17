#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "slowhom/domain.hpp"

namespace slowhom {

using BoundaryFn = std::function<double(const Vec2&)>;

// Nystrom double-layer solver for the interior Dirichlet Laplace problem:
// u(x) = int D(x, y) mu(y) ds(y), (1/2 I + K) mu = g, trapezoid rule in
// arclength (spectrally accurate for smooth closed curves).
class NystromSolver {
public:
    NystromSolver(const Domain& domain, int nodes);

    const Domain& domain() const { return domain_; }
    const BoundaryNodes& nodes() const { return nodes_; }

    Eigen::VectorXd density(const Eigen::VectorXd& g) const;
    // Layer evaluation with singularity subtraction against the nearest node.
    double evaluate(const Eigen::VectorXd& mu, const Vec2& x) const;
    // p with u(x) = p . g(nodes) for every boundary data g.
    Eigen::VectorXd poisson_weights(const Vec2& x) const;

private:
    Domain domain_;
    BoundaryNodes nodes_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

struct BVPSolution {
    const NystromSolver* solver = nullptr;
    Eigen::VectorXd mu;
    bool resolved = true;
    double nodes_per_wavelength = 0;
    double data_min = 0, data_max = 0;

    double operator()(const Vec2& x) const { return solver->evaluate(mu, x); }
};

// Resolution: at least 10 nodes per oscillation of g, judged from extrema
// of g on an 8x finer boundary sampling.
BVPSolution solve_dirichlet_laplace(const NystromSolver& solver, const BoundaryFn& g);

// Poisson kernel density s -> P(x, y(s)) reconstructed from the discrete
// Poisson weights, interpolated by local Lagrange polynomials.
class PoissonDensity {
public:
    PoissonDensity(const NystromSolver& solver, const Vec2& x);

    double operator()(double s) const;
    double length() const { return length_; }
    const std::vector<double>& values() const { return rho_; }
    // int P(x, y(s)) f(y(s)) ds over the whole boundary, trapezoid with `m` nodes.
    double integrate(const Domain& domain, const BoundaryFn& f, int m) const;
    // Same over the arclength window [a, b] with adaptive Gauss-Kronrod.
    double integrate_window(const Domain& domain, const BoundaryFn& f, double a, double b, double tol = 1e-12) const;

private:
    std::vector<double> rho_;
    double length_ = 0, h_ = 0;
};

// Harmonic measure of the arc [a, b] seen from x: Dirichlet data is a
// mollified indicator of width w, Richardson-extrapolated over w and w / 2.
double poisson_portion_mass(const NystromSolver& solver, const Vec2& x, double a, double b, double width = 0.02);

}  // namespace slowhom
