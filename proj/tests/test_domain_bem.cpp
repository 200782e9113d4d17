#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fd_oracle.hpp"
#include "slowhom/bem.hpp"
#include "slowhom/domain.hpp"

using namespace slowhom;

namespace {

const double kPi = std::numbers::pi;

const Domain& prototype() {
    static const Domain d = build_prototype_domain(PrototypeParams{1.1, 0.05, 5.0, 1.0});
    return d;
}

double smooth_data(const Vec2& y) { return std::sin(1.3 * y.x()) + y.x() * y.y() * y.y(); }

}  // namespace

TEST_CASE("prototype domain geometry") {
    const Domain& d = prototype();
    CHECK(d.closure_error() <= 1e-10);
    const auto fw = d.flat_window();
    REQUIRE(fw.has_value());
    CHECK(fw->second - fw->first == doctest::Approx(1.1).epsilon(1e-12));
    for (int i = 0; i < 400; ++i) {
        const double s = d.length() * (i + 0.5) / 400;
        if (d.on_flat(s)) {
            CHECK(d.curvature(s) == 0.0);
            CHECK(std::fabs(d.point(s).y()) < 1e-12);
        } else {
            CHECK(d.curvature(s) > 0);
        }
        CHECK(d.tangent(s).norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(supporting_line_defect(d, 1000) >= -1e-12);
    CHECK(d.contains(d.centroid()));
    CHECK_FALSE(d.contains(Vec2(0, -0.1)));
    // Green's theorem area against a fine polygon.
    const auto nodes = d.sample(20000);
    double area = 0;
    for (int i = 0; i < nodes.size(); ++i) {
        const Vec2& a = nodes.x[i];
        const Vec2& b = nodes.x[(i + 1) % nodes.size()];
        area += 0.5 * (a.x() * b.y() - a.y() * b.x());
    }
    CHECK(d.area() == doctest::Approx(area).epsilon(1e-6));
    CHECK_THROWS(build_prototype_domain(PrototypeParams{0.0, 0.05, 5.0, 1.0}));
}

TEST_CASE("curvature away from the flat part") {
    const Domain disk = disk_domain(1.0);
    for (double delta : {1e-3, 0.1, 0.5}) CHECK(kappa_delta(disk, delta) == doctest::Approx(1.0).epsilon(1e-12));
    const Domain& d = prototype();
    const double k1 = kappa_delta(d, 1e-3), k2 = kappa_delta(d, 0.1), k3 = kappa_delta(d, 0.2);
    CHECK(k1 < k2);
    CHECK(k2 <= k3);
    CHECK(k1 > 0);
}

TEST_CASE("transformed domains") {
    const Domain& d = prototype();
    const double c = std::cos(0.7), s = std::sin(0.7);
    Eigen::Matrix2d R;
    R << c, -s, s, c;
    const Domain t = d.transformed(R, Vec2(2, -1));
    CHECK(t.length() == doctest::Approx(d.length()));
    CHECK((t.point(0.3) - (R * d.point(0.3) + Vec2(2, -1))).norm() < 1e-14);
    CHECK(t.area() == doctest::Approx(d.area()).epsilon(1e-12));
}

TEST_CASE("Nystrom solver reproduces harmonic data on the disk") {
    const Domain disk = disk_domain(1.0);
    NystromSolver S(disk, 256);
    const auto one = solve_dirichlet_laplace(S, [](const Vec2&) { return 1.0; });
    const auto lin = solve_dirichlet_laplace(S, [](const Vec2& y) { return y.x(); });
    CHECK(one.resolved);
    for (int i = 0; i < 20; ++i) {
        const double r = 0.9 * (i % 4 + 1) / 4.0, a = 0.7 * i;
        const Vec2 x(r * std::cos(a), r * std::sin(a));
        CHECK(std::fabs(one(x) - 1) <= 1e-8);
        CHECK(std::fabs(lin(x) - x.x()) <= 1e-8);
    }
}

TEST_CASE("harmonic measure on the disk") {
    const Domain disk = disk_domain(1.0);
    NystromSolver S(disk, 512);
    const double L = disk.length();
    CHECK(std::fabs(poisson_portion_mass(S, Vec2(0.3, 0.2), 0, L) - 1) <= 1e-10);
    CHECK(std::fabs(poisson_portion_mass(S, Vec2::Zero(), 0, L / 2) - 0.5) <= 1e-10);
    // Exact Poisson kernel (1 - r^2) / (2 pi |x - y|^2).
    const Vec2 x(0.4, -0.1);
    PoissonDensity P(S, x);
    for (double s : {0.1, 1.7, 4.0}) {
        const Vec2 y(std::cos(s), std::sin(s));
        CHECK(P(s) == doctest::Approx((1 - x.squaredNorm()) / (2 * kPi * (x - y).squaredNorm())).epsilon(1e-8));
    }
}

TEST_CASE("prototype domain: BEM against the finite-difference oracle") {
    const Domain& d = prototype();
    NystromSolver S(d, 1024);
    const auto u = solve_dirichlet_laplace(S, smooth_data);
    CHECK(u.resolved);
    const auto fd = testing::solve_fd_dirichlet(d, smooth_data, 512);
    int count = 0;
    double worst = 0;
    for (int j = 0; j < fd.n; j += 37)
        for (int i = 0; i < fd.n; i += 37) {
            if (!fd.interior(i, j)) continue;
            const Vec2 x = fd.node(i, j);
            if (d.distance_to_boundary(x) < 0.1) continue;
            worst = std::max(worst, std::fabs(fd.value(i, j) - u(x)));
            ++count;
        }
    CHECK(count >= 20);
    CHECK(worst <= 1e-4);
    // Poisson weights reproduce the layer evaluation.
    const Vec2 c = d.centroid();
    PoissonDensity P(S, c);
    CHECK(P.integrate(d, smooth_data, 8192) == doctest::Approx(u(c)).epsilon(1e-8));
    const auto fw = *d.flat_window();
    const double flat_mass = poisson_portion_mass(S, c, fw.first, fw.second);
    CHECK(flat_mass > 0);
    CHECK(flat_mass < 1);
}
