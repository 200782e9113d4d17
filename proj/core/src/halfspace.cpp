#include "slowhom/halfspace.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// frac(xi . theta) computed exactly for any size of xi.
double phase_mod_one(const IntVector& xi, const std::vector<double>& theta) {
    bool small = true;
    for (const auto& z : xi) small = small && z.fits_slong_p() && abs(z) < (1L << 26);
    if (small) {
        long double s = 0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            long double prod = static_cast<long double>(xi[i].get_si()) * static_cast<long double>(theta[i]);
            s += prod - std::floor(prod);
        }
        return static_cast<double>(s - std::floor(s));
    }
    mpq_class s = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) s += mpq_class(xi[i]) * mpq_class(theta[i]);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    mpq_class fr = s - fl;
    return fr.get_d();
}

SpectralMode make_mode(int stage, const IntVector& xi, const LogValue& c, const OrthonormalFrame& frame) {
    SpectralMode m;
    m.stage = stage;
    m.xi = xi;
    m.c = c;
    m.gap_sq = projection_gap_sq(frame.generator, xi);
    m.ln_gap = sgn(m.gap_sq) == 0 ? kNegInf : 0.5 * ln_abs(m.gap_sq);
    m.tang = tangential_components(frame, xi);
    return m;
}

const SpectralMode& mode_for_stage(const BoundaryData& data, int k) {
    for (const auto& m : data.modes)
        if (m.stage == k) return m;
    throw std::invalid_argument("no spectral mode for stage " + std::to_string(k));
}

}  // namespace

bool BoundaryData::check_invariants() const {
    if (!symmetric) return false;
    // Super-polynomial decay: the exponent -ln c / ln|xi| grows strictly, and
    // c |xi|^10 decreases once that exponent exceeds 10.
    double prev_exp = -std::numeric_limits<double>::infinity();
    double prev_proxy = std::numeric_limits<double>::infinity();
    for (const auto& m : modes) {
        if (is_zero(m.xi)) return false;
        if (m.c.is_zero()) continue;
        const double ln_n = 0.5 * ln_abs(norm_sq(m.xi));
        if (ln_n <= 0) continue;
        const double e = -m.c.ln() / ln_n;
        if (!(e > prev_exp)) return false;
        prev_exp = e;
        if (e > 10) {
            const double proxy = m.c.ln() + 10.0 * ln_n;
            if (!(proxy < prev_proxy)) return false;
            prev_proxy = proxy;
        }
    }
    return true;
}

BoundaryData build_boundary_data(const DirectionCertificate& cert, int K) {
    if (K < 1 || K + 1 > static_cast<int>(cert.stages.size()))
        throw std::invalid_argument("build_boundary_data: K exceeds certificate stages");
    BoundaryData d;
    d.normal = cert.normal();
    d.frame = complete_frame(d.normal);
    for (int k = 1; k <= K; ++k) {
        const IntVector& xi = cert.stages[k - 1];
        // ln c = -k ln|xi|
        const LogValue c = LogValue::from_ln(-0.5 * k * ln_abs(norm_sq(xi)));
        d.modes.push_back(make_mode(k, xi, c, d.frame));
    }
    return d;
}

BoundaryData boundary_data_from_modes(const std::vector<std::pair<IntVector, LogValue>>& modes,
                                      const IntVector& normal, const std::vector<int>& stages) {
    BoundaryData d;
    d.normal = normal;
    d.frame = complete_frame(normal);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (is_zero(modes[i].first)) throw std::invalid_argument("boundary data cannot carry the zero mode");
        const int st = stages.empty() ? static_cast<int>(i) + 1 : stages[i];
        d.modes.push_back(make_mode(st, modes[i].first, modes[i].second, d.frame));
    }
    return d;
}

BoundaryData rebase(const BoundaryData& data, const IntVector& normal) {
    BoundaryData d;
    d.normal = normal;
    d.frame = complete_frame(normal);
    d.symmetric = data.symmetric;
    for (const auto& m : data.modes) d.modes.push_back(make_mode(m.stage, m.xi, m.c, d.frame));
    return d;
}

double ln_decay(double a, double ln_gap, const LogValue& t) {
    if (t.is_zero() || ln_gap == kNegInf) return 0.0;
    const double x = std::exp(std::log(a) + ln_gap + t.ln());
    return std::isfinite(x) ? -x : kNegInf;
}

double eval_V(const BoundaryData& data, const std::vector<double>& theta, const LogValue& t) {
    if (static_cast<int>(theta.size()) != data.dim()) throw std::invalid_argument("eval_V: dimension mismatch");
    double v = 0;
    for (const auto& m : data.modes) {
        const double ln_amp = std::log(2.0) + m.c.ln() + ln_decay(2 * kPi, m.ln_gap, t);
        if (m.c.is_zero() || ln_amp < -745.0) continue;
        v += m.c.sign() * std::exp(ln_amp) * std::cos(2 * kPi * phase_mod_one(m.xi, theta));
    }
    return v;
}

LogValue eval_S(const BoundaryData& data, const LogValue& t) {
    LogValue s;
    for (const auto& m : data.modes) {
        if (m.c.is_zero()) continue;
        const double e = ln_decay(4 * kPi, m.ln_gap, t);
        if (e == kNegInf) continue;
        s += LogValue::from_ln(std::log(2.0) + 2.0 * m.c.ln() + e);
    }
    return s;
}

LogValue schedule_tk(const Modulus& w, const BoundaryData& data, int k) {
    const SpectralMode& m = mode_for_stage(data, k);
    const double ln_target = -1.0 - k * ln_abs(norm_sq(m.xi));
    return w.invert(LogValue::from_ln(ln_target));
}

ScheduleCertificate certify_slow_convergence(const BoundaryData& data, const Modulus& w, int K,
                                             const Omega1* omega1) {
    ScheduleCertificate sc;
    for (int k = 1; k <= K; ++k) {
        const SpectralMode& m = mode_for_stage(data, k);
        const LogValue tk = schedule_tk(w, data, k);
        const LogValue S = eval_S(data, tk);
        const LogValue om = w.eval(tk);
        const double margin = S.is_zero() ? kNegInf : S.ln() - om.ln();
        double ln_g = m.ln_gap;
        if (omega1) {
            try {
                const double w1 = omega1->eval(LogValue::from_ln(0.5 * ln_abs(norm_sq(m.xi))), k).ln();
                ln_g = std::min(ln_g, w1);
            } catch (const std::exception&) {
            }
        }
        const double lhs = ln_decay(4 * kPi, ln_g, tk) - k * ln_abs(norm_sq(m.xi));
        const double analytic = lhs - om.ln();
        if (!sc.t.empty() && !(tk > sc.t.back())) sc.pass = false;
        sc.t.push_back(tk);
        sc.S.push_back(S);
        sc.omega.push_back(om);
        sc.margins.push_back(margin);
        sc.analytic_margins.push_back(analytic);
        if (!(margin >= -1e-9)) sc.pass = false;
        if (!(analytic >= -1e-9)) sc.analytic_pass = false;
    }
    return sc;
}

namespace {

Eigen::VectorXd tangential_chart(const BoundaryData& data, const Eigen::VectorXd& y) {
    if (y.size() != data.dim()) throw std::invalid_argument("halfspace solution: dimension mismatch");
    const double along = data.frame.n().dot(y);
    if (std::fabs(along) > 1e-12 * std::max(y.norm(), 1e-300) && y.norm() > 0)
        throw std::invalid_argument("halfspace solution: point is not tangential");
    return data.frame.N().transpose() * y;
}

}  // namespace

double eval_halfspace_solution(const BoundaryData& data, const Eigen::VectorXd& y_tangential, const LogValue& lambda) {
    const Eigen::VectorXd z = tangential_chart(data, y_tangential);
    double v = 0;
    for (const auto& m : data.modes) {
        const double ln_amp = std::log(2.0) + m.c.ln() + ln_decay(2 * kPi, m.ln_gap, lambda);
        if (m.c.is_zero() || ln_amp < -745.0) continue;
        v += m.c.sign() * std::exp(ln_amp) * std::cos(2 * kPi * m.tang.dot(z));
    }
    return v;
}

LogValue eval_halfspace_solution_log(const BoundaryData& data, const Eigen::VectorXd& y_tangential,
                                     const LogValue& lambda) {
    const Eigen::VectorXd z = tangential_chart(data, y_tangential);
    LogValue v;
    for (const auto& m : data.modes) {
        if (m.c.is_zero()) continue;
        const double e = ln_decay(2 * kPi, m.ln_gap, lambda);
        if (e == kNegInf) continue;
        const double cs = std::cos(2 * kPi * m.tang.dot(z));
        if (cs == 0) continue;
        v += LogValue::from_ln(std::log(2.0) + m.c.ln() + e + std::log(std::fabs(cs)), m.c.sign() * (cs > 0 ? 1 : -1));
    }
    return v;
}

double eval_halfspace_point(const BoundaryData& data, const Eigen::VectorXd& y) {
    const double zd = data.frame.n().dot(y);
    const Eigen::VectorXd z = data.frame.N().transpose() * y;
    double v = 0;
    for (const auto& m : data.modes) {
        if (m.c.is_zero()) continue;
        const double g = m.ln_gap == kNegInf ? 0.0 : std::exp(m.ln_gap);
        const double ln_amp = std::log(2.0) + m.c.ln() - 2 * kPi * g * zd;
        if (ln_amp < -745.0) continue;
        v += m.c.sign() * std::exp(ln_amp) * std::cos(2 * kPi * m.tang.dot(z));
    }
    return v;
}

BoundaryData trim_for_radius(const BoundaryData& data, double R) {
    if (!(R > 0)) throw std::invalid_argument("trim_for_radius: R must be positive");
    const mpq_class r(R);
    const mpq_class limit = 1 / (64 * r * r);
    int last_bad = -1;
    for (std::size_t i = 0; i < data.modes.size(); ++i)
        if (data.modes[i].gap_sq > limit) last_bad = static_cast<int>(i);
    BoundaryData out = data;
    out.modes.erase(out.modes.begin(), out.modes.begin() + (last_bad + 1));
    if (out.modes.empty()) throw std::runtime_error("trim_for_radius: every mode dropped, spectrum empty");
    return out;
}

namespace {

// Extended-precision point evaluation so the stencil's h^2 term is not
// swamped by cancellation in the second differences.
long double eval_point_ld(const BoundaryData& data, const Eigen::VectorXd& y) {
    const Eigen::VectorXd n = data.frame.n();
    const Eigen::MatrixXd N = data.frame.N();
    long double zd = 0;
    for (int i = 0; i < y.size(); ++i) zd += static_cast<long double>(n(i)) * y(i);
    long double v = 0;
    for (const auto& m : data.modes) {
        if (m.c.is_zero()) continue;
        const long double g = m.ln_gap == kNegInf ? 0.0L : std::exp(static_cast<long double>(m.ln_gap));
        const long double ln_amp = std::log(2.0L) + m.c.ln() - 2 * std::numbers::pi_v<long double> * g * zd;
        if (ln_amp < -11000.0L) continue;
        long double phase = 0;
        for (int j = 0; j < N.cols(); ++j) {
            long double zj = 0;
            for (int i = 0; i < y.size(); ++i) zj += static_cast<long double>(N(i, j)) * y(i);
            phase += static_cast<long double>(m.tang(j)) * zj;
        }
        v += m.c.sign() * std::exp(ln_amp) * std::cos(2 * std::numbers::pi_v<long double> * phase);
    }
    return v;
}

}  // namespace

HarmonicityReport harmonicity_residual(const BoundaryData& data, const std::vector<Eigen::VectorXd>& samples,
                                       double h) {
    if (!(h > 0)) throw std::invalid_argument("harmonicity_residual: h must be positive");
    const int d = data.dim();
    HarmonicityReport rep;
    double coeff_sum = 0, grad_sum = 0;
    for (const auto& m : data.modes) {
        coeff_sum += 2.0 * std::exp(m.c.ln());
        if (m.ln_gap != kNegInf) grad_sum += 2.0 * std::exp(m.c.ln()) * 2 * kPi * std::numbers::sqrt2 * std::exp(m.ln_gap);
    }
    double env = 0;
    for (const auto& y : samples) {
        const double zd = data.frame.n().dot(y);
        if (zd < 2 * h) throw std::invalid_argument("harmonicity_residual: sample too close to the boundary");
        const long double v0 = eval_point_ld(data, y);
        long double lap = 0;
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd yp = y, ym = y;
            yp(i) += h;
            ym(i) -= h;
            lap += eval_point_ld(data, yp) + eval_point_ld(data, ym) - 2 * v0;
        }
        lap /= static_cast<long double>(h) * h;
        rep.max_residual = std::max(rep.max_residual, static_cast<double>(std::fabs(lap)));
        double trunc = 0;
        for (const auto& m : data.modes) {
            if (m.ln_gap == kNegInf) continue;
            const double g = std::exp(m.ln_gap);
            const double L = 2 * kPi * std::numbers::sqrt2 * g;
            trunc += 2.0 * std::exp(m.c.ln() - 2 * kPi * g * (zd - h)) * std::pow(L, 4);
        }
        // Rounding of the sum, plus the stencil points y +- h e_i being rounded to double.
        const double rounding = 8.0 * d * std::numeric_limits<long double>::epsilon() * coeff_sum / (h * h) +
                                2.0 * d * std::numeric_limits<double>::epsilon() * (y.cwiseAbs().maxCoeff() + h) *
                                    grad_sum / (h * h);
        env = std::max(env, h * h / 12.0 * trunc + rounding);
    }
    rep.envelope = env;
    rep.within_envelope = rep.max_residual <= env;
    return rep;
}

}  // namespace slowhom
