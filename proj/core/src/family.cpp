#include "slowhom/family.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

mpq_class rational_floor(double x, int bits = 30) {
    const mpz_class num = static_cast<long>(std::floor(std::ldexp(x, bits)));
    mpz_class den = 1;
    den <<= bits;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

// Fractional part of a rational in [0, 1).
mpq_class frac(const mpq_class& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return q - fl;
}

mpq_class dot_rational(const IntVector& xi, const std::vector<double>& x) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) s += mpq_class(xi[i]) * mpq_class(x[i]);
    return s;
}

double ln_norm(const IntVector& xi) { return 0.5 * ln_abs(norm_sq(xi)); }

double abs_tail(const Profile& p, double A) {
    if (!p.compact()) return p.tail(A);
    const IntegralEstimate total = profile_abs_integral(p);
    const IntegralEstimate inner = profile_abs_integral(p, A);
    return std::max(0.0, total.value - inner.value) + total.error + inner.error;
}

nlohmann::json ln_json(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json FamilyConstants::to_json() const {
    return {{"tau0", tau0},       {"eps0", eps0}, {"A0", A0},
            {"delta0", delta0},   {"rho", rho.get_str()}, {"sup_l1", sup_l1}};
}

FamilyConstants compute_family_constants(const std::vector<Profile>& reps) {
    if (reps.empty()) throw std::invalid_argument("compute_family_constants: no representatives");
    FamilyConstants fc;
    fc.tau0 = std::numeric_limits<double>::infinity();
    std::vector<double> IF;
    for (const auto& p : reps) {
        const IntegralEstimate I = profile_integral(p);
        if (!(std::fabs(I.value) - I.error > 0)) throw FamilyRejection("profile '" + p.name + "' has vanishing integral");
        IF.push_back(std::fabs(I.value) - I.error);
        fc.tau0 = std::min(fc.tau0, IF.back());
        fc.sup_l1 = std::max(fc.sup_l1, p.norm_l1);
    }
    bool found = false;
    for (int j = -20; j <= 60 && !found; ++j) {
        const double A = std::ldexp(1.0, j);
        bool ok = true;
        for (std::size_t i = 0; i < reps.size() && ok; ++i) {
            const IntegralEstimate inner = profile_integral(reps[i], A);
            ok = std::fabs(inner.value) - inner.error >= 2 * abs_tail(reps[i], A) + 0.5 * IF[i];
        }
        if (ok) {
            fc.A0 = A;
            found = true;
        }
    }
    if (!found) throw FamilyRejection("no A0 on the doubling grid satisfies the concentration inequality");
    fc.eps0 = 1;
    for (const auto& p : reps) {
        const IntegralEstimate inner = profile_integral(p, fc.A0);
        fc.eps0 = std::min(fc.eps0, (std::fabs(inner.value) - inner.error) / p.norm_l1);
    }
    fc.delta0 = std::acos(1 - fc.eps0 / 4);
    const double x = 3 * fc.tau0 / (32 * fc.sup_l1);
    fc.rho = rational_floor(0.5 * x / (1 + x));
    return fc;
}

Omega1 family_omega1(const Modulus& w, const FamilyConstants& fc, bool stage_aware) {
    return Omega1::family(w, fc.delta0, fc.A0, fc.tau0, stage_aware);
}

LogValue schedule_lambda(const Modulus& w, double tau0, const IntVector& xi_k, int k) {
    return w.invert(LogValue::from_ln(std::log(0.375 * tau0) - k * ln_norm(xi_k)));
}

double ln_phase_product(const LogValue& lambda, double A0, double ln_gap) {
    if (ln_gap == kNegInf) return kNegInf;
    return std::log(2 * kPi) + lambda.ln() + std::log(A0) + ln_gap;
}

nlohmann::json SignedSpectrum::to_json() const {
    nlohmann::json j;
    j["normal"] = int_vector_to_json(normal);
    j["policy"] = policy == SignPolicy::Signed ? "signed" : "positive";
    j["indices"] = indices;
    j["modes"] = nlohmann::json::array();
    for (const auto& m : modes)
        j["modes"].push_back({{"stage", m.stage},
                              {"xi", int_vector_to_json(m.xi)},
                              {"ln_c", m.c.ln()},
                              {"eps", m.eps},
                              {"phase", m.phase.get_str()},
                              {"ln_gap", ln_json(m.ln_gap)}});
    return j;
}

namespace {

SpectrumMode make_spectrum_mode(const IntVector& xi, int stage, const IntVector& normal, const OrthonormalFrame& frame) {
    if (xi.size() != 2) throw std::invalid_argument("family spectra are implemented for d = 2");
    SpectrumMode m;
    m.stage = stage;
    m.xi = xi;
    m.c = LogValue::from_ln(-stage * ln_norm(xi));
    const mpq_class g2 = projection_gap_sq(normal, xi);
    m.ln_gap = sgn(g2) == 0 ? kNegInf : 0.5 * ln_abs(g2);
    m.tang = tangential_components(frame, xi)(0);
    return m;
}

}  // namespace

SignedSpectrum spectrum_from_certificate(const DirectionCertificate& cert, int K) {
    if (K < 1 || K > cert.K()) throw std::invalid_argument("spectrum_from_certificate: K exceeds certificate stages");
    SignedSpectrum s;
    s.normal = cert.normal();
    const OrthonormalFrame frame = complete_frame(s.normal);
    for (int k = 1; k <= K; ++k) {
        s.modes.push_back(make_spectrum_mode(cert.stages[k - 1], k, s.normal, frame));
        s.indices.push_back(k);
    }
    return s;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

nlohmann::json FamilyReport::to_json() const {
    nlohmann::json j;
    j["verdict"] = verdict_name(verdict);
    j["phase_ok"] = phase_ok;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : stages)
        j["stages"].push_back({{"k", s.k},
                               {"stage", s.stage},
                               {"ln_lambda", s.lambda.ln()},
                               {"ln_scale", s.ln_scale},
                               {"main", s.main},
                               {"main_error", s.main_error},
                               {"sigma1_bound", s.sigma1_bound},
                               {"sigma1_error", s.sigma1_error},
                               {"sigma1_backend", s.sigma1_backend},
                               {"sigma2_bound", s.sigma2_bound},
                               {"omega_lambda_k", s.omega_lambda},
                               {"margin", s.margin},
                               {"ln_phase", ln_json(s.ln_phase)},
                               {"phase_ok", s.phase_ok},
                               {"eps", s.eps},
                               {"verdict", verdict_name(s.verdict)}});
    return j;
}

namespace {

struct Term {
    double value = 0;   // quadrature value
    double qerr = 0;    // quadrature error estimate
    double bound = 0;   // analytic bound on the part not computed
    std::string backend;
    bool resolved = true;
};

// int F(x) cos(2 pi lambda tang x + 2 pi psi) dx
Term oscillatory_term(const Profile& F, const LogValue& lambda, const SpectrumMode& m, const mpq_class& psi) {
    Term t;
    const double phi = 2 * kPi * psi.get_d();
    if (m.ln_gap == kNegInf) {
        const IntegralEstimate I = profile_integral(F);
        t.value = I.value * std::cos(phi);
        t.qerr = I.error;
        t.backend = "quadrature";
        return t;
    }
    const double ln_a = lambda.ln() + m.ln_gap;
    const double half = F.truncation(1e-16);
    if (ln_a + std::log(half) > std::log(1e6)) {
        t.bound = std::exp(std::log(F.norm_grad_l1) - std::log(2 * kPi) - ln_a);
        t.backend = "ibp";
        return t;
    }
    const double a = std::copysign(std::exp(ln_a), m.tang);
    const OscillatoryEstimate o = profile_cos_integral(F, a, phi);
    t.value = o.value;
    t.backend = o.backend;
    t.resolved = o.resolved;
    if (o.backend == "ibp")
        t.bound = o.error;
    else
        t.qerr = o.error;
    return t;
}

mpq_class effective_phase(const SpectrumMode& m, const LogValue& lambda, const std::vector<double>& X0) {
    if (X0.empty()) return frac(m.phase);
    return frac(m.phase + to_rational(lambda) * dot_rational(m.xi, X0));
}

// x e^{ln_ratio} without forming e^{ln_ratio} on its own.
double scaled(double ln_ratio, double x) {
    if (x == 0) return 0.0;
    return std::copysign(std::exp(ln_ratio + std::log(std::fabs(x))), x);
}

bool rho_gap_holds(const SignedSpectrum& spec, const mpq_class& rho) {
    for (std::size_t i = 0; i + 1 < spec.modes.size(); ++i) {
        // |xi_i|^2 den^2 < num^2 |xi_{i+1}|^2
        const mpz_class lhs = norm_sq(spec.modes[i].xi) * rho.get_den() * rho.get_den();
        const mpz_class rhs = norm_sq(spec.modes[i + 1].xi) * rho.get_num() * rho.get_num();
        if (!(lhs < rhs)) return false;
    }
    return true;
}

}  // namespace

FamilyReport certify_family_slow(const Profile& F, SignedSpectrum& spec, const Modulus& w, const FamilyConstants& fc,
                                 const std::vector<double>& X0) {
    FamilyReport rep;
    const bool analytic_tail = rho_gap_holds(spec, fc.rho);
    for (std::size_t j = 0; j < spec.modes.size(); ++j) {
        SpectrumMode& mk = spec.modes[j];
        FamilyStageReport s;
        s.k = static_cast<int>(j) + 1;
        s.stage = mk.stage;
        s.lambda = schedule_lambda(w, fc.tau0, mk.xi, mk.stage);
        s.ln_scale = mk.c.ln();
        s.ln_phase = ln_phase_product(s.lambda, fc.A0, mk.ln_gap);
        s.phase_ok = s.ln_phase <= std::log(fc.delta0) + 1e-12;

        const Term main = oscillatory_term(F, s.lambda, mk, effective_phase(mk, s.lambda, X0));
        const double M = 2 * main.value;
        s.main = std::fabs(M);
        s.main_error = 2 * (main.qerr + main.bound);
        bool resolved = main.resolved;

        double s1 = 0, s1_err = 0, s1_bound = 0;
        std::string backends;
        for (std::size_t m = 0; m < j; ++m) {
            const SpectrumMode& mm = spec.modes[m];
            const Term t = oscillatory_term(F, s.lambda, mm, effective_phase(mm, s.lambda, X0));
            const double ln_ratio = std::log(2.0) + mm.c.ln() - mk.c.ln();
            s1 += mm.eps * scaled(ln_ratio, t.value);
            s1_err += scaled(ln_ratio, t.qerr);
            s1_bound += scaled(ln_ratio, t.bound);
            resolved = resolved && t.resolved;
            if (backends.find(t.backend) == std::string::npos) backends += (backends.empty() ? "" : "+") + t.backend;
        }
        s.sigma1_backend = backends.empty() ? "none" : backends;

        if (spec.policy == SignPolicy::Signed) {
            // Align the new term with the cross terms already fixed.
            const int sm = M < 0 ? -1 : 1;
            mk.eps = (s1 != 0 ? (s1 > 0 ? 1 : -1) : 1) * sm;
        } else {
            mk.eps = 1;
        }
        s.eps = mk.eps;
        const double aligned = (mk.eps * M >= 0 ? 1.0 : -1.0) * s1;
        s.sigma1_bound = std::max(0.0, -aligned) + s1_bound;
        s.sigma1_error = s1_err;

        double tail = 0;
        for (std::size_t m = j + 1; m < spec.modes.size(); ++m)
            tail += 2 * F.norm_l1 * std::exp(spec.modes[m].c.ln() - mk.c.ln());
        s.sigma2_bound = analytic_tail ? std::min(0.1875 * fc.tau0, tail) : tail;

        s.omega_lambda = std::exp(w.eval(s.lambda).ln() - mk.c.ln());
        s.margin = s.main - s.sigma1_bound - s.sigma2_bound - s.omega_lambda;
        const double err = s.main_error + s.sigma1_error;
        if (!s.phase_ok)
            s.verdict = Verdict::Fail;
        else if (!resolved || err > 0.5 * std::fabs(s.margin))
            s.verdict = Verdict::Inconclusive;
        else
            s.verdict = s.margin > 0 ? Verdict::Pass : Verdict::Fail;

        rep.phase_ok = rep.phase_ok && s.phase_ok;
        if (s.verdict == Verdict::Fail)
            rep.verdict = Verdict::Fail;
        else if (s.verdict == Verdict::Inconclusive && rep.verdict == Verdict::Pass)
            rep.verdict = Verdict::Inconclusive;
        rep.stages.push_back(s);
    }
    return rep;
}

SignedSpectrum build_uniform_v0(const std::vector<Profile>& reps, const DirectionCertificate& cert, const Modulus& w,
                                const FamilyConstants& fc, int K) {
    if (reps.empty()) throw std::invalid_argument("build_uniform_v0: no representatives");
    if (!w.satisfies_slow_growth()) throw std::invalid_argument("build_uniform_v0: t omega(t) must grow without bound");
    double grad = 0;
    for (const auto& p : reps) grad = std::max(grad, p.norm_grad_l1);
    const double d1 = static_cast<double>(cert.normal().size()) - 1;
    SignedSpectrum s;
    s.policy = SignPolicy::Positive;
    s.normal = cert.normal();
    const OrthonormalFrame frame = complete_frame(s.normal);
    auto mode_at = [&](int i) { return make_spectrum_mode(cert.stages[i - 1], i, s.normal, frame); };
    s.modes.push_back(mode_at(1));
    s.indices.push_back(1);
    for (int k = 2; k <= K; ++k) {
        bool found = false;
        for (int i = s.indices.back() + 1; i <= cert.K() && !found; ++i) {
            const SpectrumMode cand = mode_at(i);
            const LogValue lam = schedule_lambda(w, fc.tau0, cand.xi, i);
            // ln of sum_m 2 c_m sqrt(d-1) ||F'||_1 / (2 pi lambda g_m)
            double ln_sum = kNegInf;
            for (const auto& m : s.modes) {
                if (m.ln_gap == kNegInf) {
                    ln_sum = std::numeric_limits<double>::infinity();
                    break;
                }
                const double term = std::log(2.0) + m.c.ln() + 0.5 * std::log(d1) + std::log(grad) -
                                    std::log(2 * kPi) - lam.ln() - m.ln_gap;
                ln_sum = log_add_exp(ln_sum, term);
            }
            if (ln_sum <= std::log(0.1875 * fc.tau0) + cand.c.ln()) {
                s.modes.push_back(cand);
                s.indices.push_back(i);
                found = true;
            }
        }
        if (!found)
            throw UniformFailure("build_uniform_v0: no admissible stage for k = " + std::to_string(k) +
                                 " within the certificate's " + std::to_string(cert.K()) + " stages");
    }
    return s;
}

SignedSpectrum build_shifted_v0(const SignedSpectrum& spec, const std::vector<double>& X0,
                                const std::vector<LogValue>& lambdas) {
    if (lambdas.size() != spec.modes.size()) throw std::invalid_argument("build_shifted_v0: lambda list mismatch");
    SignedSpectrum out = spec;
    for (std::size_t m = 0; m < out.modes.size(); ++m) {
        auto& md = out.modes[m];
        md.phase = frac(md.phase - to_rational(lambdas[m]) * dot_rational(md.xi, X0));
    }
    return out;
}

double compact_support_crossterm_bound(const Profile& F, double gap, double lambda) {
    if (!F.compact()) throw std::invalid_argument("compact_support_crossterm_bound: profile is not ball-supported");
    const double r = *F.radius;
    if (lambda <= 1 / r || gap == 0) return F.norm_l1;
    // Cutoff equal to 1 up to distance 1/lambda from the support edge.
    const double ibp = (F.norm_grad_l1 + 2 * F.norm_sup) / (2 * kPi * lambda * gap);
    const double annulus = F.norm_sup * 2 / lambda;
    return std::min(F.norm_l1, ibp + annulus);
}

WeylReport weyl_average_test(const Profile& F, double h0, double c, const IntVector& xi, const IntVector& normal,
                             const std::vector<double>& lambdas) {
    if (xi.size() != 2) throw std::invalid_argument("weyl_average_test: d = 2 only");
    WeylReport rep;
    const IntegralEstimate I = profile_integral(F);
    rep.mean_term = h0 * I.value;
    const OrthonormalFrame frame = complete_frame(normal);
    const double tang = tangential_components(frame, xi)(0);
    const double gap = std::fabs(tang);
    for (double lam : lambdas) {
        WeylSample s;
        s.lambda = lam;
        if (c == 0) {
            s.value = rep.mean_term;
            s.error = std::fabs(h0) * I.error;
            s.bound = 0;
        } else {
            const OscillatoryEstimate o = profile_cos_integral(F, lam * tang);
            s.value = rep.mean_term + 2 * c * o.value;
            s.error = std::fabs(h0) * I.error + 2 * std::fabs(c) * o.error;
            const double ibp = gap > 0 ? F.norm_grad_l1 / (2 * kPi * lam * gap) : F.norm_l1;
            s.bound = 2 * std::fabs(c) * std::min(F.norm_l1, ibp);
        }
        s.within_bound = std::fabs(s.value - rep.mean_term) - s.error <= s.bound;
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace slowhom
