#include "slowhom/bem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "slowhom/parallel.hpp"
#include "slowhom/quadrature.hpp"

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;

// (1 / 2 pi) (y - x) . n_y / |y - x|^2
double double_layer(const Vec2& x, const Vec2& y, const Vec2& ny) {
    const Vec2 r = y - x;
    return r.dot(ny) / (2 * kPi * r.squaredNorm());
}

}  // namespace

NystromSolver::NystromSolver(const Domain& domain, int nodes) : domain_(domain), nodes_(domain.sample(nodes)) {
    const int n = nodes_.size();
    Eigen::MatrixXd A(n, n);
    parallel_for(n, [&](int i) {
        for (int j = 0; j < n; ++j) {
            const double k = i == j ? nodes_.kappa[i] / (4 * kPi) : double_layer(nodes_.x[i], nodes_.x[j], nodes_.normal[j]);
            A(i, j) = (i == j ? 0.5 : 0.0) + nodes_.weight * k;
        }
    });
    lu_.compute(A);
}

Eigen::VectorXd NystromSolver::density(const Eigen::VectorXd& g) const {
    if (g.size() != nodes_.size()) throw std::invalid_argument("NystromSolver::density: data size mismatch");
    return lu_.solve(g);
}

namespace {

int nearest_node(const BoundaryNodes& b, const Vec2& x) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < b.size(); ++j) {
        const double d = (b.x[j] - x).squaredNorm();
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    return best;
}

Eigen::VectorXd layer_weights(const BoundaryNodes& b, const Vec2& x) {
    const int n = b.size();
    Eigen::VectorXd r(n);
    for (int j = 0; j < n; ++j) r(j) = b.weight * double_layer(x, b.x[j], b.normal[j]);
    // Gauss identity: int D(x, y) ds(y) = 1 for interior x.
    r(nearest_node(b, x)) += 1.0 - r.sum();
    return r;
}

}  // namespace

double NystromSolver::evaluate(const Eigen::VectorXd& mu, const Vec2& x) const {
    return layer_weights(nodes_, x).dot(mu);
}

Eigen::VectorXd NystromSolver::poisson_weights(const Vec2& x) const {
    return lu_.transpose().solve(layer_weights(nodes_, x));
}

BVPSolution solve_dirichlet_laplace(const NystromSolver& solver, const BoundaryFn& g) {
    const BoundaryNodes& b = solver.nodes();
    const int n = b.size();
    Eigen::VectorXd f(n);
    for (int j = 0; j < n; ++j) f(j) = g(b.x[j]);
    BVPSolution sol;
    sol.solver = &solver;
    sol.mu = solver.density(f);
    const Domain& d = solver.domain();
    const int m = 8 * n;
    std::vector<double> fine(m);
    for (int j = 0; j < m; ++j) fine[j] = g(d.point(d.length() * j / m));
    sol.data_min = *std::min_element(fine.begin(), fine.end());
    sol.data_max = *std::max_element(fine.begin(), fine.end());
    int extrema = 0;
    const double scale = std::max(1e-300, sol.data_max - sol.data_min);
    for (int j = 0; j < m; ++j) {
        const double a = fine[(j + m - 1) % m], c = fine[j], e = fine[(j + 1) % m];
        if ((c - a) * (e - c) < 0 && std::fabs(c - a) + std::fabs(e - c) > 1e-9 * scale) ++extrema;
    }
    const double oscillations = std::max(1.0, extrema / 2.0);
    sol.nodes_per_wavelength = n / oscillations;
    sol.resolved = sol.nodes_per_wavelength >= 10;
    return sol;
}

PoissonDensity::PoissonDensity(const NystromSolver& solver, const Vec2& x) {
    const Eigen::VectorXd p = solver.poisson_weights(x);
    const BoundaryNodes& b = solver.nodes();
    length_ = b.length;
    h_ = b.weight;
    rho_.resize(b.size());
    for (int j = 0; j < b.size(); ++j) rho_[j] = p(j) / b.weight;
}

double PoissonDensity::operator()(double s) const {
    constexpr int kPts = 12;
    const int n = static_cast<int>(rho_.size());
    double t = std::fmod(s, length_);
    if (t < 0) t += length_;
    const double u = t / h_;
    const int base = static_cast<int>(std::floor(u)) - kPts / 2 + 1;
    const double frac = u - std::floor(u);
    if (frac == 0.0) return rho_[static_cast<int>(std::floor(u)) % n];
    double acc = 0;
    for (int i = 0; i < kPts; ++i) {
        const double xi = base + i;
        double l = 1;
        for (int k = 0; k < kPts; ++k)
            if (k != i) l *= (u - (base + k)) / (xi - (base + k));
        acc += l * rho_[((base + i) % n + n) % n];
    }
    return acc;
}

double PoissonDensity::integrate(const Domain& domain, const BoundaryFn& f, int m) const {
    const double h = domain.length() / m;
    double acc = 0;
    for (int j = 0; j < m; ++j) {
        const double s = j * h;
        acc += (*this)(s) * f(domain.point(s));
    }
    return acc * h;
}

double PoissonDensity::integrate_window(const Domain& domain, const BoundaryFn& f, double a, double b, double tol) const {
    const QuadResult q = integrate_gk([&](double s) { return (*this)(s) * f(domain.point(s)); }, a, b, tol, 1e-13, 200000);
    return q.value;
}

double poisson_portion_mass(const NystromSolver& solver, const Vec2& x, double a, double b, double width) {
    const Domain& d = solver.domain();
    const double L = d.length();
    if (!(b > a)) throw std::invalid_argument("poisson_portion_mass: empty arc");
    const PoissonDensity rho(solver, x);
    if (b - a >= L) {
        double acc = 0;
        for (double v : rho.values()) acc += v;
        return acc * solver.nodes().weight;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto mass = [&](double w) {
        // Smoothed indicator of the arc, periodic in s.
        auto chi = [&](double s) {
            double t = std::fmod(s - mid, L);
            if (t < -0.5 * L) t += L;
            if (t > 0.5 * L) t -= L;
            return 0.5 * (std::erf((t + half) / w) - std::erf((t - half) / w));
        };
        const int m = std::max(8 * solver.nodes().size(), static_cast<int>(std::ceil(40 * L / w)));
        const double h = L / m;
        double acc = 0;
        for (int j = 0; j < m; ++j) acc += rho(j * h) * chi(j * h);
        return acc * h;
    };
    const double u1 = mass(width), u2 = mass(0.5 * width);
    return (4 * u2 - u1) / 3;
}

}  // namespace slowhom
