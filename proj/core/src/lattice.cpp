#include "slowhom/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace slowhom {

namespace {

constexpr double kLn2 = std::numbers::ln2;

mpz_class mpz_from_log(double ln_value) {
    // floor(exp(ln_value)) for ln_value >= 0
    if (ln_value < 0) return 0;
    const double x = ln_value / kLn2;
    const double E = std::floor(x);
    const double mant = std::exp2(x - E);  // in [1, 2)
    mpz_class m = static_cast<unsigned long>(std::ldexp(mant, 62));
    const long shift = static_cast<long>(E) - 62;
    if (shift >= 0) return m << static_cast<mp_bitcnt_t>(shift);
    return m >> static_cast<mp_bitcnt_t>(-shift);
}

bool lex_greater(const IntVector& a, const IntVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return false;
}

// Preferred candidate: smaller norm, then lexicographically greater.
bool better(const IntVector& a, const mpz_class& na, const IntVector& b, const mpz_class& nb) {
    if (na != nb) return na < nb;
    return lex_greater(a, b);
}

IntVector axpy(const mpz_class& m, const IntVector& p, const IntVector& e) {
    IntVector out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = m * p[i] + e[i];
    return out;
}

// |a ^ b|^2 = |a|^2 |b|^2 - (a.b)^2
mpz_class wedge_sq(const IntVector& a, const IntVector& b) {
    const mpz_class ab = dot(a, b);
    return norm_sq(a) * norm_sq(b) - ab * ab;
}

// ln |a/|a| - b/|b||^2, stable for nearly parallel vectors.
double ln_chord_sq(const IntVector& a, const IntVector& b) {
    const mpz_class na = norm_sq(a), nb = norm_sq(b), ab = dot(a, b);
    const mpz_class w = na * nb - ab * ab;
    if (sgn(ab) <= 0) {
        const double c = sgn(ab) == 0 ? 0.0 : -std::exp(ln_abs(ab) - 0.5 * (ln_abs(na) + ln_abs(nb)));
        return std::log(2.0 - 2.0 * c);
    }
    if (sgn(w) == 0) return -std::numeric_limits<double>::infinity();
    const double c = std::exp(ln_abs(ab) - 0.5 * (ln_abs(na) + ln_abs(nb)));
    return std::log(2.0) + ln_abs(w) - ln_abs(na) - ln_abs(nb) - std::log1p(std::min(c, 1.0));
}

double slack(double a, double b) {
    return 1e-13 + 4e-13 * (std::fabs(a) + std::fabs(b));
}

using Predicate = std::function<bool(const IntVector&)>;

struct LineSearchResult {
    IntVector vec;
    bool found = false;
};

// Smallest m >= 1 (up to relative 2^-60 for huge m) with pred(m p + e).
LineSearchResult search_line(const IntVector& p, const IntVector& e, const Predicate& pred, double ln_m_guess,
                             double max_ln) {
    LineSearchResult res;
    mpz_class m = mpz_from_log(ln_m_guess + std::log1p(-1e-9));
    if (m < 1) m = 1;
    mpz_class lo = 0;  // largest m known invalid (0 = none)
    mpz_class hi;
    if (pred(axpy(m, p, e))) {
        hi = m;
        mpz_class probe = m - (m >> 20) - 1;
        if (probe >= 1 && !pred(axpy(probe, p, e))) lo = probe;
        else if (probe >= 1) {
            hi = probe;
            lo = 0;
        }
    } else {
        lo = m;
        mpz_class step = (m >> 20) + 1;
        for (int it = 0;; ++it) {
            mpz_class cand = lo + step;
            if (ln_abs(cand) > max_ln || it > 4000) {
                throw ApproximationFailure("approximate_direction: search budget exhausted", cand);
            }
            if (pred(axpy(cand, p, e))) {
                hi = cand;
                break;
            }
            lo = cand;
            step *= 2;
        }
    }
    for (int it = 0; it < 400; ++it) {
        const mpz_class gap = hi - lo;
        if (gap <= 1) break;
        if (hi > (mpz_class(1) << 64) && gap <= (hi >> 60)) break;
        mpz_class mid = lo + gap / 2;
        if (mid < 1) break;
        if (pred(axpy(mid, p, e))) hi = mid;
        else lo = mid;
    }
    res.vec = axpy(hi, p, e);
    res.found = true;
    return res;
}

// Offsets e such that m p + e approaches the line through p.
std::vector<IntVector> line_offsets(const IntVector& p) {
    const std::size_t d = p.size();
    std::vector<IntVector> out;
    const mpz_class np = norm_sq(p);
    auto reduce = [&](IntVector e) {
        mpq_class q(dot(e, p), np);
        mpz_class k;
        mpz_class num = q.get_num() * 2 + q.get_den();
        mpz_class den = q.get_den() * 2;
        mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        for (std::size_t i = 0; i < d; ++i) e[i] -= k * p[i];
        return e;
    };
    if (d == 2) {
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p[0].get_mpz_t(), p[1].get_mpz_t());
        if (g < 0) {
            g = -g;
            s = -s;
            t = -t;
        }
        IntVector q = {p[0] / g, p[1] / g};
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), q[0].get_mpz_t(), q[1].get_mpz_t());
        IntVector e = reduce(IntVector{t, -s});
        out.push_back(e);
        out.push_back(IntVector{-e[0], -e[1]});
        return out;
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (int sgnv : {1, -1}) {
            IntVector e(d, 0);
            e[j] = sgnv;
            if (sgn(wedge_sq(e, p)) == 0) continue;
            out.push_back(reduce(e));
        }
    }
    return out;
}

IntVector find_near_direction(const IntVector& p, double ln_tol, const mpz_class& min_norm_sq, const Predicate& pred,
                              double max_ln, long box_limit) {
    const mpz_class np = norm_sq(p);
    const double ln_np = ln_abs(np);
    IntVector best;
    mpz_class best_n;
    mpz_class largest = 0;
    for (const auto& e : line_offsets(p)) {
        const mpz_class w2 = norm_sq(e) * np - dot(e, p) * dot(e, p);
        const double ln_m_tol = 0.5 * ln_abs(w2) - ln_tol - ln_np;
        const double ln_m_norm = min_norm_sq > 0 ? 0.5 * (ln_abs(min_norm_sq) - ln_np) : 0.0;
        const double ln_m = std::max({ln_m_tol, ln_m_norm, 0.0});
        if (ln_m > max_ln) throw ApproximationFailure("approximate_direction: required norm exceeds budget",
                                                      mpz_from_log(std::min(ln_m, 700.0)));
        LineSearchResult r;
        try {
            r = search_line(p, e, pred, ln_m, max_ln);
        } catch (const ApproximationFailure& f) {
            largest = std::max(largest, f.largest_denominator);
            continue;
        }
        const mpz_class n = norm_sq(r.vec);
        if (best.empty() || better(r.vec, n, best, best_n)) {
            best = r.vec;
            best_n = n;
        }
    }
    if (best.empty()) throw ApproximationFailure("approximate_direction: no candidate found", largest);

    // exhaustive refinement over the ball of radius |best|
    const std::size_t d = p.size();
    mpz_class R;
    mpz_sqrt(R.get_mpz_t(), best_n.get_mpz_t());
    if (R.fits_slong_p()) {
        const long r = R.get_si();
        double box = 1.0;
        for (std::size_t i = 0; i < d; ++i) box *= static_cast<double>(2 * r + 1);
        if (box <= static_cast<double>(box_limit)) {
            std::vector<long> x(d, -r);
            const long bn = best_n.get_si();
            for (;;) {
                long n2 = 0;
                for (long xi : x) n2 += xi * xi;
                if (n2 <= bn && n2 > 0 && mpz_class(n2) >= min_norm_sq) {
                    IntVector cand(d);
                    for (std::size_t i = 0; i < d; ++i) cand[i] = x[i];
                    const mpz_class cn = n2;
                    if (better(cand, cn, best, best_n) && pred(cand)) {
                        best = cand;
                        best_n = cn;
                    }
                }
                std::size_t i = 0;
                while (i < d && ++x[i] > r) {
                    x[i] = -r;
                    ++i;
                }
                if (i == d) break;
            }
        }
    }
    return best;
}

}  // namespace

IntVector make_int_vector(std::initializer_list<long> coords) {
    IntVector v;
    for (long c : coords) v.emplace_back(c);
    return v;
}

mpz_class dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

mpz_class norm_sq(const IntVector& a) { return dot(a, a); }

bool is_zero(const IntVector& a) {
    return std::all_of(a.begin(), a.end(), [](const mpz_class& z) { return sgn(z) == 0; });
}

double ln_abs(const mpz_class& z) {
    if (sgn(z) == 0) return -std::numeric_limits<double>::infinity();
    long exp = 0;
    const double m = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(m)) + static_cast<double>(exp) * kLn2;
}

double ln_abs(const mpq_class& q) { return ln_abs(q.get_num()) - ln_abs(q.get_den()); }

std::string to_string(const IntVector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ")";
    return os.str();
}

nlohmann::json int_vector_to_json(const IntVector& v) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& z : v) j.push_back(z.get_str());
    return j;
}

IntVector int_vector_from_json(const nlohmann::json& j) {
    IntVector v;
    for (const auto& e : j) {
        if (e.is_string()) v.emplace_back(e.get<std::string>());
        else v.emplace_back(e.get<long>());
    }
    return v;
}

mpq_class to_rational(const LogValue& v) {
    if (v.is_zero()) return 0;
    const double x = v.ln() / kLn2;
    const double E = std::floor(x);
    const double mant = std::exp2(x - E);
    mpz_class m = static_cast<unsigned long>(std::ldexp(mant, 62));
    const long shift = static_cast<long>(E) - 62;
    mpq_class q = m;
    if (shift >= 0) q *= mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(shift));
    else q /= mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(-shift));
    q.canonicalize();
    return v.sign() < 0 ? mpq_class(-q) : q;
}

mpq_class projection_gap_sq(const IntVector& base, const IntVector& xi) {
    if (is_zero(base)) throw std::invalid_argument("projection_gap_sq: zero base");
    const mpz_class nb = norm_sq(base);
    const mpz_class d = dot(base, xi);
    mpq_class r(norm_sq(xi) * nb - d * d, nb);
    r.canonicalize();
    return r;
}

bool is_diophantine(const IntVector& base, const mpq_class& kappa, const mpq_class& l,
                    const std::vector<IntVector>& test_set) {
    if (is_zero(base)) throw std::invalid_argument("is_diophantine: zero base");
    if (kappa <= 0) throw std::invalid_argument("is_diophantine: kappa must be positive");
    if (mpq_class(static_cast<long>(base.size()) - 1) * l <= 1)
        throw std::invalid_argument("is_diophantine: need (d-1) l > 1");
    if (!l.get_den().fits_ulong_p() || !l.get_num().fits_slong_p())
        throw std::invalid_argument("is_diophantine: l too large");
    const unsigned long v = l.get_den().get_ui();
    const long u = l.get_num().get_si();
    for (const auto& xi : test_set) {
        if (xi.size() != base.size() || is_zero(xi)) throw std::invalid_argument("is_diophantine: bad test vector");
        // gap^2 >= kappa^2 N^-l  <=>  gap2^v N^u >= kappa^(2v)
        const mpq_class g = projection_gap_sq(base, xi);
        if (sgn(g) == 0) return false;
        mpq_class lhs = 1, rhs = 1;
        for (unsigned long i = 0; i < v; ++i) lhs *= g;
        const mpz_class n = norm_sq(xi);
        mpz_class npow;
        mpz_pow_ui(npow.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(u >= 0 ? u : -u));
        if (u >= 0) lhs *= npow;
        else rhs *= npow;
        for (unsigned long i = 0; i < 2 * v; ++i) rhs *= kappa;
        if (lhs < rhs) return false;
    }
    return true;
}

OrthonormalFrame complete_frame(const IntVector& base) {
    if (is_zero(base)) throw std::invalid_argument("complete_frame: zero base");
    const int d = static_cast<int>(base.size());
    const mp_bitcnt_t prec = 256;
    mpf_class nrm(0, prec);
    mpf_class nb(norm_sq(base), prec);
    nrm = sqrt(nb);
    Eigen::VectorXd n(d);
    for (int i = 0; i < d; ++i) {
        mpf_class q(base[i], prec);
        q /= nrm;
        n(i) = q.get_d();
    }
    // 1 - n_d computed without cancellation
    mpf_class tail(0, prec);
    for (int i = 0; i + 1 < d; ++i) tail += mpf_class(base[i] * base[i], prec);
    mpf_class one_minus(0, prec);
    const mpf_class nd(mpf_class(base[d - 1], prec) / nrm);
    if (nd > 0) one_minus = (tail / nb) / (mpf_class(1, prec) + nd);
    else one_minus = mpf_class(1, prec) - nd;

    OrthonormalFrame f;
    f.generator = base;
    f.M = Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd v(d);
    for (int i = 0; i + 1 < d; ++i) v(i) = -n(i);
    v(d - 1) = one_minus.get_d();
    const double vv = v.squaredNorm();
    if (vv > 0) f.M -= 2.0 * v * v.transpose() / vv;
    f.M.col(d - 1) = n;
    return f;
}

Eigen::VectorXd tangential_components(const OrthonormalFrame& frame, const IntVector& xi) {
    const IntVector& b = frame.generator;
    const mpz_class nb = norm_sq(b);
    const mpz_class d = dot(b, xi);
    Eigen::VectorXd proj(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        mpq_class c(xi[i] * nb - d * b[i], nb);
        c.canonicalize();
        proj(static_cast<Eigen::Index>(i)) = c.get_d();
    }
    return frame.N().transpose() * proj;
}

bool direction_distance_within(const IntVector& a, const IntVector& b, const mpq_class& bound_sq) {
    // |a/|a| - b/|b||^2 = 2 - 2c, c = a.b / (|a||b|)
    const mpq_class q = 1 - bound_sq / 2;
    const mpz_class ab = dot(a, b);
    const mpz_class nn = norm_sq(a) * norm_sq(b);
    if (q <= -1) return true;
    if (q <= 0) {
        if (sgn(ab) >= 0) return true;
        return mpq_class(ab * ab) <= q * q * nn;
    }
    if (sgn(ab) <= 0) return false;
    return mpq_class(ab * ab) >= q * q * nn;
}

IntVector approximate_direction(const IntVector& r, const mpq_class& tol, const mpz_class& min_norm) {
    if (is_zero(r)) throw std::invalid_argument("approximate_direction: zero direction");
    if (tol <= 0) throw std::invalid_argument("approximate_direction: tol must be positive");
    const mpq_class tol_sq = tol * tol;
    const mpz_class min_sq = min_norm * min_norm;
    Predicate pred = [&](const IntVector& x) {
        if (sgn(wedge_sq(x, r)) == 0) return false;
        if (norm_sq(x) < min_sq) return false;
        return direction_distance_within(x, r, tol_sq);
    };
    const double ln_tol = std::min(ln_abs(tol), std::log(2.0));
    return find_near_direction(r, ln_tol, min_sq, pred, 2.0e6, 400000);
}

Omega1 Omega1::plain(const Modulus& w) {
    Omega1 o;
    o.kind = Kind::Plain;
    o.base = w;
    return o;
}

Omega1 Omega1::halfspace(const Modulus& w, bool stage_aware) {
    Omega1 o;
    o.kind = Kind::Halfspace;
    o.base = w;
    o.stage_aware = stage_aware;
    return o;
}

Omega1 Omega1::family(const Modulus& w, double delta0, double A0, double tau0, bool stage_aware) {
    Omega1 o;
    o.kind = Kind::Family;
    o.base = w;
    o.stage_aware = stage_aware;
    o.delta0 = delta0;
    o.A0 = A0;
    o.tau0 = tau0;
    return o;
}

LogValue Omega1::eval(const LogValue& t, int k) const {
    switch (kind) {
        case Kind::Plain: return base.eval(t);
        case Kind::Halfspace: return stage_aware ? omega1_halfspace_stage(base, t, k) : omega1_halfspace(base, t);
        case Kind::Family:
            return stage_aware ? omega1_family_stage(base, t, k, delta0, A0, tau0)
                               : omega1_family(base, t, delta0, A0, tau0);
    }
    throw std::logic_error("unknown omega1 kind");
}

std::optional<std::pair<long, long>> Omega1::exact_power() const {
    if (kind != Kind::Plain) return std::nullopt;
    return base.rational_exponent();
}

nlohmann::json Omega1::to_json() const {
    if (kind == Kind::Plain) return base.to_json();
    nlohmann::json j;
    j["kind"] = kind == Kind::Halfspace ? "omega1_halfspace" : "omega1_family";
    j["base"] = base.to_json();
    j["stage_aware"] = stage_aware;
    if (kind == Kind::Family) {
        j["delta0"] = delta0;
        j["A0"] = A0;
        j["tau0"] = tau0;
    }
    return j;
}

Omega1 Omega1::from_json(const nlohmann::json& j) {
    if (!j.contains("kind")) return plain(Modulus::from_json(j));
    const std::string k = j.at("kind").get<std::string>();
    const Modulus w = Modulus::from_json(j.at("base"));
    const bool sa = j.value("stage_aware", false);
    if (k == "omega1_halfspace") return halfspace(w, sa);
    if (k == "omega1_family")
        return family(w, j.at("delta0").get<double>(), j.at("A0").get<double>(), j.at("tau0").get<double>(), sa);
    throw std::invalid_argument("unknown omega1 kind '" + k + "'");
}

namespace {

struct StepSpec {
    double ln_bound = 0;
    std::optional<mpq_class> bound_sq;
};

StepSpec step_spec(const Omega1& omega1, const IntVector& xi, int k, long b) {
    const mpz_class n = norm_sq(xi);
    const double ln_n = ln_abs(n);
    const LogValue w1 = omega1.eval(LogValue::from_ln(0.5 * ln_n), k);
    StepSpec s;
    s.ln_bound = 2.0 * w1.ln() - k * std::log(static_cast<double>(b)) - ln_n;
    if (auto ep = omega1.exact_power(); ep && (2 * ep->first) % ep->second == 0) {
        // bound^2 = n^-(2p) / (b^2k n^2)
        const unsigned long e = static_cast<unsigned long>(2 * ep->first / ep->second) + 2;
        mpz_class den, bk;
        mpz_pow_ui(den.get_mpz_t(), n.get_mpz_t(), e);
        mpz_class bb = b;
        mpz_pow_ui(bk.get_mpz_t(), bb.get_mpz_t(), 2UL * static_cast<unsigned long>(k));
        s.bound_sq = mpq_class(1, den * bk);
        s.bound_sq->canonicalize();
    }
    return s;
}

bool step_ok(const IntVector& next, const IntVector& cur, const StepSpec& s, double* lhs_out = nullptr) {
    const double lhs = ln_chord_sq(next, cur);
    if (lhs_out) *lhs_out = lhs;
    if (s.bound_sq) return direction_distance_within(next, cur, *s.bound_sq);
    const double rhs = 2.0 * s.ln_bound;
    return lhs + slack(lhs, rhs) <= rhs - slack(lhs, rhs);
}

}  // namespace

DirectionCertificate construct_bad_direction(const Omega1& omega1, int K, const IntVector& seed, long gap_base,
                                             const mpq_class& rho, const ConstructionOptions& opts) {
    if (K < 1) throw std::invalid_argument("construct_bad_direction: K must be >= 1");
    if (gap_base < 2) throw std::invalid_argument("construct_bad_direction: gap_base must be >= 2");
    if (rho <= 0 || rho >= 1) throw std::invalid_argument("construct_bad_direction: rho must lie in (0,1)");
    if (is_zero(seed) || seed.size() < 2) throw std::invalid_argument("construct_bad_direction: bad seed");

    DirectionCertificate cert;
    cert.omega1 = omega1;
    cert.gap_base = gap_base;
    cert.rho = rho;
    cert.stages.push_back(seed);

    for (int k = 1; k <= K; ++k) {
        const IntVector& cur = cert.stages.back();
        const mpz_class ncur = norm_sq(cur);
        StepSpec spec;
        try {
            spec = step_spec(omega1, cur, k, gap_base);
        } catch (const std::exception& e) {
            cert.complete = false;
            cert.failed_stage = k;
            cert.failure = std::string("omega1 not evaluable: ") + e.what();
            return cert;
        }
        const double need_ln_norm = 0.5 * ln_abs(ncur) - spec.ln_bound;
        if (!std::isfinite(spec.ln_bound) || need_ln_norm > opts.max_ln_norm) {
            std::ostringstream os;
            os << "stage " << k << " needs |xi| ~ exp(" << need_ln_norm << "), beyond the budget exp("
               << opts.max_ln_norm << ")";
            cert.complete = false;
            cert.failed_stage = k;
            cert.failure = os.str();
            return cert;
        }
        mpq_class q = mpq_class(ncur) / (rho * rho);
        mpz_class min_sq = q.get_num() / q.get_den() + 1;
        min_sq = std::max(min_sq, mpz_class((k + 1) * (k + 1)));

        Predicate pred = [&](const IntVector& x) {
            if (sgn(wedge_sq(x, cur)) == 0) return false;
            if (norm_sq(x) < min_sq) return false;
            return step_ok(x, cur, spec);
        };
        try {
            IntVector next = find_near_direction(cur, spec.ln_bound, min_sq, pred, opts.max_ln_norm,
                                                 opts.exhaustive_box_limit);
            cert.stages.push_back(std::move(next));
            cert.step_bounds.push_back({k, spec.ln_bound, spec.bound_sq});
        } catch (const ApproximationFailure& e) {
            cert.complete = false;
            cert.failed_stage = k;
            cert.failure = std::string(e.what()) + " (largest denominator tried: " +
                           std::to_string(ln_abs(e.largest_denominator) / std::numbers::ln10) + " decimal digits)";
            return cert;
        }
    }
    return cert;
}

VerificationReport verify_direction_certificate(const DirectionCertificate& cert) {
    VerificationReport rep;
    const int K = cert.K();
    if (K < 1) return rep;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto add = [&](CheckRecord r) {
        rep.pass = rep.pass && r.pass;
        rep.checks.push_back(std::move(r));
    };
    for (int k = 1; k <= K; ++k) {
        const IntVector& a = cert.stages[k - 1];
        const IntVector& b = cert.stages[k];
        const mpz_class na = norm_sq(a), nb = norm_sq(b);
        add({k, "norm", 0.5 * ln_abs(na), 0.5 * ln_abs(nb), na >= k * k && nb > na && nb >= (k + 1) * (k + 1), true});
        add({k, "rho", 0.5 * ln_abs(na), 0.5 * ln_abs(nb) + ln_abs(cert.rho), mpq_class(na) < cert.rho * cert.rho * nb,
             true});
        CheckRecord step{k, "step", nan, nan, false, false};
        try {
            const StepSpec spec = step_spec(cert.omega1, a, k, cert.gap_base);
            step.rhs_ln = 2.0 * spec.ln_bound;
            step.exact = spec.bound_sq.has_value();
            double lhs = nan;
            const bool positive = sgn(wedge_sq(b, a)) != 0;
            const bool ok = step_ok(b, a, spec, &lhs);
            step.lhs_ln = lhs;
            step.pass = positive && ok;
        } catch (const std::exception&) {
            step.pass = false;
        }
        add(step);
    }
    const IntVector& top = cert.stages.back();
    const auto ep = cert.omega1.exact_power();
    for (int j = 1; j <= K; ++j) {
        const IntVector& xi = cert.stages[j - 1];
        const mpq_class g = projection_gap_sq(top, xi);
        const mpz_class n = norm_sq(xi);
        CheckRecord rec{j, "gap", ln_abs(g), nan, false, ep.has_value()};
        try {
            const LogValue w1 = cert.omega1.eval(LogValue::from_ln(0.5 * ln_abs(n)), j);
            rec.rhs_ln = 2.0 * w1.ln();
            if (ep) {
                // g <= n^(-u/v)  <=>  g^v n^u <= 1
                const unsigned long u = static_cast<unsigned long>(ep->first);
                const unsigned long v = static_cast<unsigned long>(ep->second);
                mpq_class lhs = 1;
                for (unsigned long i = 0; i < v; ++i) lhs *= g;
                mpz_class np;
                mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), u);
                lhs *= np;
                rec.pass = sgn(g) > 0 && lhs <= 1;
            } else {
                rec.pass = sgn(g) > 0 && rec.lhs_ln + slack(rec.lhs_ln, rec.rhs_ln) <= rec.rhs_ln - slack(rec.lhs_ln, rec.rhs_ln);
            }
        } catch (const std::exception&) {
            rec.pass = false;
        }
        add(rec);
    }
    return rep;
}

nlohmann::json certificate_to_json(const DirectionCertificate& cert, const VerificationReport* report) {
    nlohmann::json j;
    j["omega1"] = cert.omega1.to_json();
    j["gap_base"] = cert.gap_base;
    j["rho"] = cert.rho.get_str();
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : cert.stages) st.push_back(int_vector_to_json(s));
    j["stages"] = st;
    nlohmann::json sb = nlohmann::json::array();
    for (const auto& b : cert.step_bounds) {
        sb.push_back({{"stage", b.stage},
                      {"ln_bound", b.ln_bound},
                      {"bound_sq", b.bound_sq ? nlohmann::json(b.bound_sq->get_str()) : nlohmann::json(nullptr)}});
    }
    j["step_bounds"] = sb;
    j["complete"] = cert.complete;
    if (!cert.complete) {
        j["failed_stage"] = cert.failed_stage;
        j["failure"] = cert.failure;
    }
    nlohmann::json checks = nlohmann::json::array();
    if (report) {
        for (const auto& c : report->checks) {
            checks.push_back({{"stage", c.stage},
                              {"kind", c.kind},
                              {"lhs_ln", c.lhs_ln},
                              {"rhs_ln", c.rhs_ln},
                              {"pass", c.pass},
                              {"exact", c.exact}});
        }
        j["pass"] = report->pass;
    }
    j["checks"] = checks;
    return j;
}

DirectionCertificate certificate_from_json(const nlohmann::json& j) {
    DirectionCertificate c;
    c.omega1 = Omega1::from_json(j.at("omega1"));
    c.gap_base = j.at("gap_base").get<long>();
    c.rho = mpq_class(j.at("rho").get<std::string>());
    c.rho.canonicalize();
    for (const auto& s : j.at("stages")) c.stages.push_back(int_vector_from_json(s));
    if (j.contains("step_bounds")) {
        for (const auto& b : j.at("step_bounds")) {
            StepBound sb;
            sb.stage = b.at("stage").get<int>();
            sb.ln_bound = b.at("ln_bound").get<double>();
            if (!b.at("bound_sq").is_null()) {
                sb.bound_sq = mpq_class(b.at("bound_sq").get<std::string>());
                sb.bound_sq->canonicalize();
            }
            c.step_bounds.push_back(sb);
        }
    }
    c.complete = j.value("complete", true);
    c.failed_stage = j.value("failed_stage", -1);
    c.failure = j.value("failure", std::string());
    return c;
}

}  // namespace slowhom
