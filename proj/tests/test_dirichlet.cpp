#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slowhom/dirichlet.hpp"

using namespace slowhom;

namespace {

const std::vector<double> kLambdas{25, 50, 100, 200};

double disk_weight(double s) { return 1 + 0.3 * std::cos(s); }

}  // namespace

TEST_CASE("log-log fit recovers a power law") {
    std::vector<double> v;
    for (double l : kLambdas) v.push_back(-3.0 * std::pow(l, -0.5));
    const auto [slope, lnC] = loglog_fit(kLambdas, v);
    CHECK(slope == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(lnC == doctest::Approx(std::log(3.0)).epsilon(1e-13));
    CHECK_THROWS(loglog_fit({1.0}, {1.0}));
}

TEST_CASE("random rotations are rotations and reproducible") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Eigen::Matrix2d R = random_rotation(seed);
        CHECK((R.transpose() * R - Eigen::Matrix2d::Identity()).norm() < 1e-14);
        CHECK(R.determinant() == doctest::Approx(1.0));
        CHECK(R == random_rotation(seed));
    }
    CHECK(random_rotation(1) != random_rotation(2));
}

TEST_CASE("stationary-phase decay on a circular arc") {
    const Domain disk = disk_domain(1.0);
    const auto p = curved_decay_probe(disk, disk_weight, Vec2(1, 0), Eigen::Matrix2d::Identity(), Vec2::Zero(), kLambdas);
    for (bool r : p.resolved) CHECK(r);
    CHECK(p.slope <= -0.4);
    CHECK(p.slope == doctest::Approx(-0.5).epsilon(0.05));

    std::vector<double> slopes;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto q = curved_decay_probe(disk, disk_weight, Vec2(1, 0), random_rotation(seed), Vec2(0.1, 0.2), kLambdas);
        slopes.push_back(q.slope);
        CHECK(q.slope <= -0.4);
    }
    const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
    CHECK(*hi - *lo <= 0.1);
}

TEST_CASE("zero data gives a zero integral") {
    const Domain disk = disk_domain(1.0);
    const auto p = curved_decay_probe(disk, disk_weight, Vec2(1, 0), Eigen::Matrix2d::Identity(), Vec2::Zero(), kLambdas, 0.0);
    for (double v : p.values) CHECK(v == 0.0);
    const auto q = curved_decay_probe(disk, disk_weight, Vec2(0, 0), Eigen::Matrix2d::Identity(), Vec2::Zero(), kLambdas);
    for (double v : q.values) CHECK(v == 0.0);
}

TEST_CASE("demo config round trip") {
    DemoConfig c;
    c.domain.flat_len = 0.9;
    c.omega = Modulus::power(0.25);
    c.eps_grid = {0.2, 0.1};
    const DemoConfig back = DemoConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    const DemoConfig partial = DemoConfig::from_json({{"gap_base", 3}, {"omega", "power:0.5"}});
    CHECK(partial.gap_base == 3);
    CHECK(partial.domain.flat_len == DemoConfig{}.domain.flat_len);
}
