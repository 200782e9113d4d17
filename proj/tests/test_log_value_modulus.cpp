#include <cmath>
#include <numbers>

#include "doctest.h"
#include "slowhom/modulus.hpp"

using namespace slowhom;

namespace {
LogValue lv(double x) { return LogValue::from_double(x); }
const double kPi = std::numbers::pi;
}  // namespace

TEST_CASE("log value arithmetic matches doubles") {
    const double xs[] = {-3.5, -1e-3, 0.0, 2.0, 7.25, 1e10};
    for (double a : xs)
        for (double b : xs) {
            CHECK(lv(a).to_double() == doctest::Approx(a));
            CHECK((lv(a) + lv(b)).to_double() == doctest::Approx(a + b).epsilon(1e-12));
            CHECK((lv(a) - lv(b)).to_double() == doctest::Approx(a - b).epsilon(1e-12));
            CHECK((lv(a) * lv(b)).to_double() == doctest::Approx(a * b).epsilon(1e-12));
            if (b != 0) CHECK((lv(a) / lv(b)).to_double() == doctest::Approx(a / b).epsilon(1e-12));
            CHECK(((lv(a) < lv(b)) == (a < b)));
        }
    CHECK((lv(3) - lv(3)).is_zero());
}

TEST_CASE("log value survives far outside double range") {
    const LogValue big = LogValue::from_ln(1e6), tiny = LogValue::from_ln(-1e6);
    CHECK((big * tiny).ln() == doctest::Approx(0.0));
    CHECK((big + big).ln() == doctest::Approx(1e6 + std::log(2.0)));
    CHECK((big + tiny).ln() == doctest::Approx(1e6));
    CHECK(big.pow(0.5).ln() == doctest::Approx(5e5));
    CHECK(log_add_exp(1e300, 1e300) == doctest::Approx(1e300));
    CHECK(log_add_exp(-INFINITY, 2.0) == 2.0);
}

TEST_CASE("modulus evaluation examples") {
    CHECK(Modulus::power(0.5).eval(lv(4)).to_double() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(Modulus::log_decay().eval(LogValue::zero()).to_double() == doctest::Approx(1.0).epsilon(1e-15));
    for (const auto& w : {Modulus::power(0.5), Modulus::log_decay(), Modulus::exp_decay(1.0)}) {
        for (int i = 0; i < 20; ++i)
            CHECK(w.eval(lv(std::ldexp(1.0, i))) > w.eval(lv(std::ldexp(1.0, i + 1))));
        CHECK(w.check_invariants());
    }
}

TEST_CASE("modulus inverse examples") {
    CHECK(Modulus::power(0.5).invert(lv(0.5)).to_double() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(Modulus::exp_decay(1.0).invert(lv(std::exp(-3.0))).to_double() == doctest::Approx(3.0).epsilon(1e-14));
    for (const auto& w : {Modulus::power(0.5), Modulus::power(0.25), Modulus::log_decay(), Modulus::exp_decay(1.0)})
        for (double t : {1.0, 10.0, 1e6}) {
            const double back = w.invert(w.eval(lv(t))).to_double();
            CHECK(std::fabs(back - t) <= 1e-12 * t);
        }
    CHECK_THROWS_AS(Modulus::power(0.5).invert(lv(2.0)), RangeError);
    CHECK_THROWS_AS(Modulus::power(0.5).invert(lv(-1.0)), RangeError);
}

TEST_CASE("modulus parsing and serialization") {
    const Modulus w = Modulus::parse("power:1/2");
    CHECK(w.eval(lv(9)).to_double() == doctest::Approx(1.0 / 3));
    CHECK(Modulus::parse("log").eval(LogValue::zero()).to_double() == doctest::Approx(1.0));
    CHECK(Modulus::parse("exp:2").eval(lv(1)).to_double() == doctest::Approx(std::exp(-2.0)));
    CHECK_THROWS(Modulus::parse("nonsense"));
    const Modulus r = Modulus::from_json(w.to_json());
    CHECK(r.eval(lv(123.0)).ln() == w.eval(lv(123.0)).ln());
    CHECK(Modulus::power(0.5).satisfies_slow_growth());
    CHECK_FALSE(Modulus::power(2.0).satisfies_slow_growth());
}

TEST_CASE("halfspace omega1 closed form for power 1") {
    const Modulus w = Modulus::power(1.0);
    CHECK(omega1_halfspace(w, lv(1)).to_double() == doctest::Approx(1.0 / (4 * kPi * std::numbers::e)).epsilon(1e-13));
    CHECK(omega1_halfspace(w, lv(1)).to_double() == doctest::Approx(0.02929).epsilon(1e-4));
    for (double t : {1.5, 2.0, 3.0})
        CHECK(omega1_halfspace(w, lv(t)).to_double() ==
              doctest::Approx(std::pow(t, -2 * t) / (4 * kPi * std::numbers::e)).epsilon(1e-12));
    for (const auto& m : {Modulus::power(0.5), Modulus::log_decay(), Modulus::exp_decay(1.0)})
        CHECK(omega1_halfspace(m, lv(2)) < omega1_halfspace(m, lv(1)));
}

TEST_CASE("halfspace omega1 log path agrees with direct float path") {
    // power 1/2: omega^-1(s) = s^-2, so omega1(t) = e^-2 t^(-4t) / (4 pi)
    const Modulus w = Modulus::power(0.5);
    for (int t = 1; t <= 20; ++t) {
        const double direct = std::exp(-2.0) * std::pow(static_cast<double>(t), -4.0 * t) / (4 * kPi);
        CHECK(omega1_halfspace(w, lv(t)).to_double() == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("family omega1 closed form") {
    const Modulus w = Modulus::power(1.0);
    CHECK(omega1_family(w, lv(1), 1, 1, 1).to_double() == doctest::Approx(3.0 / (16 * kPi)).epsilon(1e-13));
    for (double t : {2.0, 3.0})
        CHECK(omega1_family(w, lv(t), 1, 1, 1).to_double() ==
              doctest::Approx(0.375 * std::pow(t, -t) / (2 * kPi)).epsilon(1e-12));
    CHECK(omega1_family(w, lv(2.5), 2, 1, 1).to_double() ==
          doctest::Approx(2 * omega1_family(w, lv(2.5), 1, 1, 1).to_double()).epsilon(1e-13));
    for (int t = 1; t < 10; ++t) CHECK(omega1_family(w, lv(t + 1), 1, 1, 1) < omega1_family(w, lv(t), 1, 1, 1));
    CHECK_THROWS(omega1_family(w, lv(1), 0, 1, 1));
}

TEST_CASE("stage-aware omega1 variants") {
    // power 1: omega^-1(s) = 1/s
    const Modulus w = Modulus::power(1.0);
    for (int k = 1; k <= 4; ++k)
        for (double t : {1.0, 3.0, 50.0}) {
            CHECK(omega1_halfspace_stage(w, lv(t), k).to_double() ==
                  doctest::Approx(std::exp(-1.0) * std::pow(t, -2.0 * k) / (4 * kPi)).epsilon(1e-12));
            CHECK(omega1_family_stage(w, lv(t), k, 0.5, 2.0, 0.8).to_double() ==
                  doctest::Approx(0.5 / (2 * kPi * 2.0) * 0.375 * 0.8 * std::pow(t, -k)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(omega1_halfspace_stage(w, lv(0.5), 1), DomainError);
}
