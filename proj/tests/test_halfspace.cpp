#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slowhom/halfspace.hpp"

using namespace slowhom;

namespace {

const double kPi = std::numbers::pi;
IntVector iv(std::initializer_list<long> c) { return make_int_vector(c); }

const DirectionCertificate& pipeline_cert() {
    static const DirectionCertificate cert = construct_bad_direction(
        Omega1::halfspace(Modulus::power(0.5), true), 4, iv({1, 0}), 10, mpq_class(1, 2));
    return cert;
}

// Two modes against a steep rational normal; gaps 1/sqrt(101), within the R = 1 trim limit.
BoundaryData two_mode_data() {
    return boundary_data_from_modes({{iv({0, 1}), LogValue::one()}, {iv({1, 9}), LogValue::from_double(1.0 / 82)}},
                                    iv({1, 10}));
}

}  // namespace

TEST_CASE("boundary data from a certificate") {
    const auto& cert = pipeline_cert();
    REQUIRE(cert.complete);
    const auto bd = build_boundary_data(cert, 4);
    REQUIRE(bd.modes.size() == 4);
    CHECK(bd.modes[0].c.to_double() == doctest::Approx(1.0));
    CHECK(bd.symmetric);
    CHECK(bd.check_invariants());
    for (const auto& m : bd.modes)
        CHECK(m.c.ln() == doctest::Approx(-0.5 * m.stage * ln_abs(norm_sq(m.xi))).epsilon(1e-14));
    CHECK_THROWS(build_boundary_data(cert, 5));
    // Coefficients that stop decaying violate the invariant.
    const auto slow = boundary_data_from_modes({{iv({3, 1}), LogValue::from_double(0.1)}, {iv({40, 7}), LogValue::from_double(0.05)}},
                                               iv({1, 0}));
    CHECK_FALSE(slow.check_invariants());
}

TEST_CASE("V at the boundary and far away") {
    const auto bd = two_mode_data();
    const std::vector<double> zero{0.0, 0.0};
    CHECK(eval_V(bd, zero, LogValue::zero()) == doctest::Approx(2.0 + 2.0 / 82).epsilon(1e-15));
    CHECK(std::fabs(eval_V(bd, {0.3, 0.7}, LogValue::from_double(1e4))) < 1e-300);
}

TEST_CASE("single-mode V and S are the one-term formulas") {
    const auto bd = boundary_data_from_modes({{iv({2, 3}), LogValue::from_double(0.7)}}, iv({1, 1}));
    const double g = 1.0 / std::sqrt(2.0);  // |2*1 - 3*1| / sqrt 2
    for (double t : {0.0, 0.05, 0.4})
        for (double th : {0.0, 0.11, 0.37}) {
            const std::vector<double> theta{th, 2 * th};
            const double expect = 2 * 0.7 * std::exp(-2 * kPi * g * t) * std::cos(2 * kPi * (2 * th + 6 * th));
            CHECK(eval_V(bd, theta, LogValue::from_double(t)) == doctest::Approx(expect).epsilon(1e-12));
        }
    const auto unit = boundary_data_from_modes({{iv({1, 2}), LogValue::one()}}, iv({0, 1}));
    for (double t : {0.0, 0.1, 1.0})
        CHECK(eval_S(unit, LogValue::from_double(t)).to_double() ==
              doctest::Approx(2 * std::exp(-4 * kPi * t)).epsilon(1e-13));
}

TEST_CASE("S at t = 0 and the Parseval floor on a grid") {
    const auto bd = two_mode_data();
    CHECK(eval_S(bd, LogValue::zero()).to_double() == doctest::Approx(2.0 + 2.0 / (82.0 * 82.0)).epsilon(1e-14));
    for (double t : {0.0, 0.1, 1.0}) {
        const LogValue tt = t == 0 ? LogValue::zero() : LogValue::from_double(t);
        double grid_max = 0;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const double v = eval_V(bd, {i / 64.0, j / 64.0}, tt);
                grid_max = std::max(grid_max, v * v);
            }
        CHECK(eval_S(bd, tt).to_double() <= grid_max);
    }
}

TEST_CASE("schedule closed form for power 1") {
    const auto& cert = pipeline_cert();
    const auto bd = build_boundary_data(cert, 4);
    const Modulus w1 = Modulus::power(1.0);
    for (int k = 1; k <= 4; ++k) {
        const LogValue tk = schedule_tk(w1, bd, k);
        const double ln_xi = 0.5 * ln_abs(norm_sq(cert.stages[k - 1]));
        CHECK(tk.ln() == doctest::Approx(1.0 + 2 * k * ln_xi).epsilon(1e-13));
    }
    const Modulus w = Modulus::power(0.5);
    LogValue prev;
    for (int k = 1; k <= 4; ++k) {
        const LogValue tk = schedule_tk(w, bd, k);
        if (k > 1) CHECK(tk > prev);
        prev = tk;
        const double ln_xi = 0.5 * ln_abs(norm_sq(cert.stages[k - 1]));
        const double roundtrip = w.eval(tk).ln() + 1.0 + 2 * k * ln_xi;
        CHECK(std::fabs(roundtrip) <= 1e-12 * std::max(1.0, 2 * k * ln_xi));
    }
}

TEST_CASE("full pipeline margins are nonnegative") {
    const auto& cert = pipeline_cert();
    const auto bd = build_boundary_data(cert, 4);
    const Omega1 om = Omega1::halfspace(Modulus::power(0.5), true);
    const auto sc = certify_slow_convergence(bd, Modulus::power(0.5), 4, &om);
    CHECK(sc.pass);
    CHECK(sc.analytic_pass);
    for (double m : sc.margins) CHECK(m >= -1e-9);
}

TEST_CASE("zero-gap data and the mismatch test") {
    // Modes parallel to the normal never decay: S is constant and margins grow.
    const auto flat = boundary_data_from_modes(
        {{iv({1, 0}), LogValue::one()}, {iv({2, 0}), LogValue::from_double(0.25)}, {iv({3, 0}), LogValue::from_double(1.0 / 27)}},
        iv({1, 0}));
    const auto sc = certify_slow_convergence(flat, Modulus::power(0.5), 3);
    CHECK(eval_S(flat, LogValue::from_double(1e9)).ln() == doctest::Approx(eval_S(flat, LogValue::zero()).ln()));
    CHECK(sc.margins[1] > sc.margins[0]);
    CHECK(sc.margins[2] > sc.margins[1]);

    // The pipeline spectrum checked against a rational normal has large gaps.
    const auto bd = rebase(build_boundary_data(pipeline_cert(), 4), iv({0, 1}));
    const auto bad = certify_slow_convergence(bd, Modulus::power(0.5), 4);
    bool some_negative = false;
    for (double m : bad.margins) some_negative = some_negative || m < 0;
    CHECK(some_negative);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("half-space solution evaluation") {
    const auto bd = two_mode_data();
    const double g = 1.0 / std::sqrt(101.0);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    for (double lam : {0.0, 0.5, 3.0}) {
        const double expect = (2.0 + 2.0 / 82) * std::exp(-2 * kPi * g * lam);
        CHECK(eval_halfspace_solution(bd, zero, LogValue::from_double(lam)) == doctest::Approx(expect).epsilon(1e-13));
    }
    const Eigen::VectorXd y = bd.frame.N().col(0) * 0.37;
    for (double lam : {0.1, 1.0}) {
        const std::vector<double> theta{y(0), y(1)};
        CHECK(eval_halfspace_solution(bd, y, LogValue::from_double(lam)) ==
              doctest::Approx(eval_V(bd, theta, LogValue::from_double(lam))).epsilon(1e-12));
        CHECK(eval_halfspace_solution_log(bd, y, LogValue::from_double(lam)).to_double() ==
              doctest::Approx(eval_halfspace_solution(bd, y, LogValue::from_double(lam))).epsilon(1e-12));
    }
    CHECK(std::fabs(eval_halfspace_solution(bd, y, LogValue::from_double(1e5))) < 1e-300);
    Eigen::VectorXd off = y + 0.1 * bd.frame.n();
    CHECK_THROWS(eval_halfspace_solution(bd, off, LogValue::one()));
}

TEST_CASE("trimming for a radius") {
    const auto bd = two_mode_data();
    CHECK(trim_for_radius(bd, 1.0).modes.size() == 2);
    const auto pipeline = build_boundary_data(pipeline_cert(), 4);
    for (double R : {1.0, 100.0, 1e5}) {
        const auto tr = trim_for_radius(pipeline, R);
        const mpq_class r(R);
        for (const auto& m : tr.modes) CHECK(m.gap_sq * 64 * r * r <= 1);
    }
    CHECK_THROWS(trim_for_radius(bd, 100.0));
}

TEST_CASE("tangential lower bound on the trimmed pipeline data") {
    const auto tr = trim_for_radius(build_boundary_data(pipeline_cert(), 4), 1.0);
    const Modulus w = Modulus::power(0.5);
    for (int k = 1; k <= 3; ++k) {
        const LogValue tk = schedule_tk(w, tr, k);
        const LogValue S = eval_S(tr, tk);
        double lo = INFINITY;
        for (int i = 0; i <= 50; ++i) {
            const Eigen::VectorXd y = tr.frame.N().col(0) * (-1.0 + 2.0 * i / 50);
            const LogValue v = eval_halfspace_solution_log(tr, y, tk);
            REQUIRE(v.is_positive());
            lo = std::min(lo, v.ln() - S.ln());
        }
        CHECK(lo >= -0.5 * std::log(2.0) - 1e-10);
    }
}

TEST_CASE("harmonicity residual") {
    const auto bd = two_mode_data();
    const Eigen::VectorXd y = bd.frame.N().col(0) * 0.3 + bd.frame.n() * 0.5;
    const auto r1 = harmonicity_residual(bd, {y}, 1e-3);
    const auto r2 = harmonicity_residual(bd, {y}, 5e-4);
    CHECK(r1.within_envelope);
    CHECK(r2.within_envelope);
    double scale = 0;
    for (const auto& m : bd.modes) scale += std::pow(2 * kPi * std::sqrt(norm_sq(m.xi).get_d()), 4) * m.c.to_double();
    CHECK(r1.max_residual <= 1e-6 * scale);
    const double ratio = r1.max_residual / r2.max_residual;
    CHECK(ratio >= 3.2);
    CHECK(ratio <= 4.8);

    // A mode parallel to the normal is constant: residual is rounding only.
    const auto flat = boundary_data_from_modes({{iv({1, 0}), LogValue::one()}}, iv({1, 0}));
    Eigen::VectorXd p(2);
    p << 0.5, 0.25;
    CHECK(harmonicity_residual(flat, {p}, 1e-3).max_residual < 1e-12);
    CHECK_THROWS(harmonicity_residual(bd, {bd.frame.n() * 1e-4}, 1e-3));
}
