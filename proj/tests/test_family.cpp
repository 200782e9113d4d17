#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slowhom/family.hpp"
#include "slowhom/quadrature.hpp"

using namespace slowhom;

namespace {

const double kPi = std::numbers::pi;
IntVector iv(std::initializer_list<long> c) { return make_int_vector(c); }

struct Pipeline {
    Profile F = gaussian_profile();
    FamilyConstants fc;
    Modulus w = Modulus::power(0.25);
    DirectionCertificate cert;
};

const Pipeline& pipeline() {
    static const Pipeline p = [] {
        Pipeline q;
        q.fc = compute_family_constants({q.F});
        q.cert = construct_bad_direction(family_omega1(q.w, q.fc), 3, iv({1, 0}), 2, q.fc.rho);
        return q;
    }();
    return p;
}

// Oracle for the concentration inequality of e^{-x^2} at half-width A.
bool gaussian_concentrated(double A) {
    const double inner = std::sqrt(kPi) * std::erf(A), outer = std::sqrt(kPi) * std::erfc(A);
    return inner >= 2 * outer + 0.5 * std::sqrt(kPi);
}

}  // namespace

TEST_CASE("family constants for the Gaussian") {
    const auto& p = pipeline();
    CHECK(profile_integral(p.F).value == doctest::Approx(1.77245).epsilon(1e-5));
    CHECK(gaussian_concentrated(2.0));
    CHECK(gaussian_concentrated(1.0));
    CHECK_FALSE(gaussian_concentrated(0.5));
    // Smallest power of two passing the inequality.
    CHECK(p.fc.A0 == 1.0);
    CHECK(p.fc.eps0 > 0);
    CHECK(p.fc.eps0 <= 1);
    CHECK(p.fc.eps0 == doctest::Approx(std::erf(1.0)).epsilon(1e-12));
    CHECK(p.fc.delta0 == doctest::Approx(std::acos(1 - p.fc.eps0 / 4)).epsilon(1e-14));
    CHECK(p.fc.tau0 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
    CHECK(p.fc.rho > 0);
    CHECK(p.fc.rho < 1);
    CHECK_THROWS_AS(compute_family_constants({zero_profile()}), FamilyRejection);
}

TEST_CASE("schedule lambda closed form for power 1/4") {
    const auto& p = pipeline();
    REQUIRE(p.cert.complete);
    LogValue prev;
    for (int k = 1; k <= 3; ++k) {
        const IntVector& xi = p.cert.stages[k - 1];
        const LogValue lam = schedule_lambda(p.w, p.fc.tau0, xi, k);
        const double expect = -4 * std::log(0.375 * p.fc.tau0) + 2 * k * ln_abs(norm_sq(xi));
        CHECK(lam.ln() == doctest::Approx(expect).epsilon(1e-13));
        if (k > 1) CHECK(lam > prev);
        prev = lam;
    }
}

TEST_CASE("signed certificate on the pipeline spectrum") {
    const auto& p = pipeline();
    SignedSpectrum spec = spectrum_from_certificate(p.cert, 3);
    const FamilyReport rep = certify_family_slow(p.F, spec, p.w, p.fc);
    CHECK(rep.phase_ok);
    CHECK(rep.verdict == Verdict::Pass);
    for (const auto& s : rep.stages) {
        CHECK(s.phase_ok);
        CHECK(s.ln_phase <= std::log(p.fc.delta0) + 1e-12);
        CHECK(s.margin > 0);
    }
    const auto j = rep.to_json();
    CHECK(j["verdict"] == "pass");
    CHECK(j["stages"].size() == 3);
}

TEST_CASE("single-mode spectrum margin") {
    const auto& p = pipeline();
    SignedSpectrum spec = spectrum_from_certificate(p.cert, 3);
    spec.modes.resize(1);
    const FamilyReport rep = certify_family_slow(p.F, spec, p.w, p.fc);
    REQUIRE(rep.stages.size() == 1);
    const auto& s = rep.stages[0];
    CHECK(s.sigma1_bound == 0);
    CHECK(s.sigma2_bound == 0);
    CHECK(s.margin == doctest::Approx(s.main - s.omega_lambda));
    CHECK(s.margin >= 0.375 * p.fc.tau0 - 1e-12);
}

TEST_CASE("zero-gap modes integrate F exactly") {
    const auto& p = pipeline();
    SignedSpectrum spec;
    spec.normal = iv({1, 0});
    for (int k = 1; k <= 2; ++k) {
        SpectrumMode m;
        m.stage = k;
        m.xi = iv({k, 0});
        m.c = LogValue::from_ln(-k * std::log(static_cast<double>(k)));
        m.ln_gap = -INFINITY;
        spec.modes.push_back(m);
    }
    const FamilyReport rep = certify_family_slow(p.F, spec, p.w, p.fc);
    CHECK(rep.stages[0].main == doctest::Approx(2 * std::sqrt(kPi)).epsilon(1e-12));
    CHECK(rep.phase_ok);
}

TEST_CASE("broken gap is flagged by the phase bound") {
    const auto& p = pipeline();
    DirectionCertificate broken = p.cert;
    broken.stages[1] = iv({3, 1});
    SignedSpectrum spec = spectrum_from_certificate(broken, 3);
    const FamilyReport rep = certify_family_slow(p.F, spec, p.w, p.fc);
    CHECK_FALSE(rep.phase_ok);
    CHECK(rep.verdict == Verdict::Fail);
}

TEST_CASE("uniform spectrum") {
    const auto& p = pipeline();
    const auto one = build_uniform_v0({p.F}, p.cert, p.w, p.fc, 1);
    CHECK(one.indices == std::vector<int>{1});
    const auto u = build_uniform_v0({p.F}, p.cert, p.w, p.fc, 3);
    CHECK(u.indices == std::vector<int>{1, 2, 3});
    SignedSpectrum spec = u;
    const FamilyReport rep = certify_family_slow(p.F, spec, p.w, p.fc);
    CHECK(rep.verdict == Verdict::Pass);
    for (const auto& s : rep.stages) CHECK(s.sigma1_bound <= 0.1875 * p.fc.tau0 + s.sigma1_error);
    CHECK_THROWS_AS(build_uniform_v0({p.F}, p.cert, p.w, p.fc, 4), UniformFailure);
    CHECK_THROWS(build_uniform_v0({p.F}, p.cert, Modulus::power(2.0), p.fc, 2));
}

TEST_CASE("two-profile uniform family keeps cross terms finite") {
    const std::vector<Profile> reps{gaussian_profile(), bump_profile(1.0)};
    const FamilyConstants fc = compute_family_constants(reps);
    const Modulus w = Modulus::power(0.25);
    const auto cert = construct_bad_direction(family_omega1(w, fc), 3, iv({1, 0}), 2, fc.rho);
    REQUIRE(cert.complete);
    const auto u = build_uniform_v0(reps, cert, w, fc, 3);
    for (const auto& F : reps) {
        SignedSpectrum spec = u;
        const FamilyReport rep = certify_family_slow(F, spec, w, fc);
        for (const auto& s : rep.stages) {
            CHECK(std::isfinite(s.sigma1_bound));
            CHECK(std::isfinite(s.margin));
        }
        CHECK(rep.verdict == Verdict::Pass);
    }
}

TEST_CASE("shifted spectrum") {
    const auto& p = pipeline();
    SignedSpectrum spec = spectrum_from_certificate(p.cert, 3);
    const FamilyReport base = certify_family_slow(p.F, spec, p.w, p.fc);
    std::vector<LogValue> lams;
    for (const auto& m : spec.modes) lams.push_back(schedule_lambda(p.w, p.fc.tau0, m.xi, m.stage));

    const auto same = build_shifted_v0(spec, {0.0, 0.0}, lams);
    for (std::size_t i = 0; i < spec.modes.size(); ++i) CHECK(same.modes[i].phase == spec.modes[i].phase);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int trial = 0; trial < 3; ++trial) {
        const std::vector<double> X0{U(rng), U(rng)};
        SignedSpectrum sh = build_shifted_v0(spec, X0, lams);
        for (std::size_t i = 0; i < spec.modes.size(); ++i) CHECK(sh.modes[i].c.ln() == spec.modes[i].c.ln());
        const FamilyReport rep = certify_family_slow(p.F, sh, p.w, p.fc, X0);
        for (std::size_t i = 0; i < rep.stages.size(); ++i)
            CHECK(std::fabs(rep.stages[i].margin - base.stages[i].margin) <=
                  2 * (base.stages[i].main_error + base.stages[i].sigma1_error) + 1e-14);
    }
}

TEST_CASE("cross-term bound for ball-supported profiles") {
    const Profile b = bump_profile(1.0);
    CHECK(compact_support_crossterm_bound(b, 0.0, 100.0) == doctest::Approx(b.norm_l1));
    const double b1 = compact_support_crossterm_bound(b, 1.0, 1e3), b2 = compact_support_crossterm_bound(b, 1.0, 1e4);
    CHECK(b2 == doctest::Approx(b1 / 10).epsilon(1e-12));
    const double gap = 1.0, lam = 100.0;
    const auto q = integrate_gk([&](double x) { return b.F(x) * std::cos(2 * kPi * lam * gap * x); }, -1, 1, 1e-15, 1e-14,
                                100000);
    CHECK(compact_support_crossterm_bound(b, gap, lam) >= std::fabs(q.value));
}

TEST_CASE("Weyl averaging") {
    const Profile F = gaussian_profile();
    const auto flat = weyl_average_test(F, 1.3, 0.0, iv({1, 0}), iv({1, 1}), {10, 100});
    for (const auto& s : flat.samples) CHECK(s.value == doctest::Approx(1.3 * std::sqrt(kPi)).epsilon(1e-13));

    const Profile wide = gaussian_profile(1.0, 5.0);
    const auto& p = pipeline();
    const auto rep = weyl_average_test(wide, 0.0, 1.0, p.cert.stages[0], p.cert.normal(), {10, 100, 1000});
    CHECK(std::fabs(rep.samples[2].value) < std::fabs(rep.samples[0].value));
    for (const auto& s : rep.samples) CHECK(s.within_bound);
}
