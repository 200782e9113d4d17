#include <cmath>

#include "doctest.h"
#include "slowhom/lattice.hpp"

using namespace slowhom;

namespace {

IntVector iv(std::initializer_list<long> c) { return make_int_vector(c); }

// Exact chord check |a/|a| - b/|b||^2 <= bound in long double, for the brute-force oracle.
long double chord_sq(const IntVector& a, const IntVector& b) {
    long double na = 0, nb = 0, ab = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += a[i].get_d() * a[i].get_d();
        nb += b[i].get_d() * b[i].get_d();
        ab += a[i].get_d() * b[i].get_d();
    }
    return 2 - 2 * ab / std::sqrt(na * nb);
}

}  // namespace

TEST_CASE("projection gap examples") {
    CHECK(projection_gap_sq(iv({0, 1}), iv({0, 5})) == 0);
    CHECK(projection_gap_sq(iv({0, 1}), iv({3, 4})) == 9);
    CHECK(projection_gap_sq(iv({1, 1}), iv({1, 0})) == mpq_class(1, 2));
    CHECK(projection_gap_sq(iv({1, 2, 2}), iv({1, 0, 0})) == mpq_class(8, 9));
}

TEST_CASE("Diophantine predicate on finite sets") {
    CHECK(is_diophantine(iv({0, 1}), 1, 2, {iv({1, 0})}));
    CHECK(is_diophantine(iv({1, 1}), mpq_class(7, 5), 2, {iv({1, -1})}));
    CHECK_FALSE(is_diophantine(iv({1, 0}), mpq_class(1, 1000), 2, {iv({3, 0})}));
}

TEST_CASE("orthonormal frame completion") {
    const auto f2 = complete_frame(iv({0, 1}));
    CHECK((f2.M.transpose() * f2.M - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    CHECK(std::fabs(std::fabs(f2.N()(0, 0)) - 1.0) < 1e-14);
    CHECK((f2.n() - Eigen::Vector2d(0, 1)).norm() < 1e-14);

    const auto f3 = complete_frame(iv({1, 2, 2}));
    CHECK((f3.M.transpose() * f3.M - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);
    CHECK((f3.n() - Eigen::Vector3d(1, 2, 2) / 3.0).norm() < 1e-12);
    CHECK(tangential_components(f3, iv({1, 0, 0})).squaredNorm() == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK_THROWS(complete_frame(iv({0, 0, 0})));
}

TEST_CASE("approximate_direction matches brute force") {
    const IntVector r = iv({1, 0});
    const IntVector xi = approximate_direction(r, mpq_class(1, 5), 2);
    CHECK(xi == iv({5, 1}));
    CHECK(direction_distance_within(r, xi, mpq_class(1, 25)));
    // Oracle: nothing of smaller norm in the ball of radius 30 qualifies.
    const mpz_class n2 = norm_sq(xi);
    for (long a = -30; a <= 30; ++a)
        for (long b = -30; b <= 30; ++b) {
            const IntVector c = iv({a, b});
            if (is_zero(c) || norm_sq(c) >= n2 || norm_sq(c) < 4 || projection_gap_sq(r, c) == 0) continue;
            CHECK(chord_sq(r, c) > 1.0L / 25);
        }
}

TEST_CASE("approximate_direction with a loose tolerance and in three dimensions") {
    const IntVector r2 = iv({1, 0});
    const IntVector loose = approximate_direction(r2, 2, 3);
    CHECK(norm_sq(loose) >= 9);
    CHECK(projection_gap_sq(r2, loose) > 0);

    const IntVector r3 = iv({1, 0, 0});
    const IntVector xi = approximate_direction(r3, mpq_class(1, 10), 2);
    CHECK(direction_distance_within(r3, xi, mpq_class(1, 100)));
    CHECK(projection_gap_sq(r3, xi) > 0);
    CHECK(chord_sq(r3, xi) <= 0.01L);
}

TEST_CASE("single-step construction") {
    const auto cert = construct_bad_direction(Omega1::plain(Modulus::power(0.5)), 1, iv({1, 0}), 10, mpq_class(1, 2));
    REQUIRE(cert.complete);
    REQUIRE(cert.stages.size() == 2);
    // omega1(1)^2 / (10 * 1) = 1/10
    CHECK(direction_distance_within(cert.stages[0], cert.stages[1], mpq_class(1, 10)));
    CHECK(projection_gap_sq(cert.stages[0], cert.stages[1]) > 0);
    CHECK(verify_direction_certificate(cert).pass);
}

TEST_CASE("pipeline certificates satisfy the structural properties") {
    for (int d : {2, 3}) {
        IntVector seed(d);
        seed[0] = 1;
        const auto cert = construct_bad_direction(Omega1::plain(Modulus::power(0.5)), 4, seed, 10, mpq_class(1, 2));
        REQUIRE(cert.complete);
        for (std::size_t k = 0; k < cert.stages.size(); ++k) {
            CHECK(norm_sq(cert.stages[k]) >= mpz_class(static_cast<long>((k + 1) * (k + 1))));
            if (k) CHECK(norm_sq(cert.stages[k]) > norm_sq(cert.stages[k - 1]));
        }
        CHECK(verify_direction_certificate(cert).pass);
        const auto back = certificate_from_json(certificate_to_json(cert));
        CHECK(back.stages == cert.stages);
        CHECK(verify_direction_certificate(back).pass);
    }
}

TEST_CASE("degenerate and corrupted certificates") {
    DirectionCertificate single;
    single.omega1 = Omega1::plain(Modulus::power(0.5));
    single.stages = {iv({1, 0})};
    CHECK(verify_direction_certificate(single).pass);

    auto cert = construct_bad_direction(Omega1::plain(Modulus::power(0.5)), 3, iv({1, 0}), 10, mpq_class(1, 2));
    REQUIRE(cert.complete);
    IntVector doubled = cert.stages[0];
    for (auto& z : doubled) z *= 2;
    cert.stages[1] = doubled;
    const auto rep = verify_direction_certificate(cert);
    CHECK_FALSE(rep.pass);
    bool stage1_failed = false;
    for (const auto& c : rep.checks) stage1_failed = stage1_failed || (c.stage == 1 && !c.pass);
    CHECK(stage1_failed);
}

TEST_CASE("stage-aware omega1 and the exact rational path") {
    const Omega1 om = Omega1::halfspace(Modulus::power(0.5), true);
    CHECK(om.eval(LogValue::from_double(2), 2) < om.eval(LogValue::from_double(2), 1));
    CHECK(Omega1::plain(Modulus::power(0.5)).exact_power().has_value());
    const Omega1 back = Omega1::from_json(om.to_json());
    CHECK(back.eval(LogValue::from_double(3), 2).ln() == om.eval(LogValue::from_double(3), 2).ln());
}

TEST_CASE("construction failure is reported, not thrown") {
    const auto cert =
        construct_bad_direction(Omega1::halfspace(Modulus::log_decay(), true), 4, iv({1, 0}), 10, mpq_class(1, 2));
    CHECK_FALSE(cert.complete);
    CHECK(cert.failed_stage >= 1);
    CHECK_FALSE(cert.failure.empty());
}
