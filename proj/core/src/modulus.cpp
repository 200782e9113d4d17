#include "slowhom/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace slowhom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* family_name(ModulusFamily f) {
    switch (f) {
        case ModulusFamily::Power: return "power";
        case ModulusFamily::Log: return "log";
        case ModulusFamily::Exp: return "exp";
        case ModulusFamily::Table: return "table";
    }
    return "?";
}

LogValue checked(double ln_mag, const char* what) {
    if (!std::isfinite(ln_mag)) throw RangeError(std::string(what) + ": value outside representable range");
    return LogValue::from_ln(ln_mag);
}

// ln t for a non-negative LogValue; -inf for zero.
double ln_of(const LogValue& t) {
    if (t.sign() < 0) throw DomainError("modulus argument must be non-negative");
    return t.is_zero() ? -kInf : t.ln();
}

}  // namespace

Modulus::Modulus(ModulusFamily f, std::vector<double> params, double start)
    : family_(f), params_(std::move(params)), domain_start_(start) {}

Modulus Modulus::power(double p, double domain_start) {
    if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("power modulus needs p > 0");
    if (!(domain_start > 0)) throw std::invalid_argument("power modulus needs domain_start > 0");
    return Modulus(ModulusFamily::Power, {p}, domain_start);
}

Modulus Modulus::log_decay(double shift, double domain_start) {
    if (!(shift >= std::numbers::e - 1e-12)) throw std::invalid_argument("log modulus needs shift >= e");
    if (!(domain_start >= 0)) throw std::invalid_argument("log modulus needs domain_start >= 0");
    return Modulus(ModulusFamily::Log, {shift}, domain_start);
}

Modulus Modulus::exp_decay(double c, double domain_start) {
    if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("exp modulus needs c > 0");
    if (!(domain_start >= 0)) throw std::invalid_argument("exp modulus needs domain_start >= 0");
    return Modulus(ModulusFamily::Exp, {c}, domain_start);
}

Modulus Modulus::table(std::vector<double> ts, std::vector<double> ws) {
    if (ts.size() != ws.size() || ts.size() < 2) throw std::invalid_argument("table modulus needs >= 2 samples");
    std::vector<double> params;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0) || !(ws[i] > 0)) throw std::invalid_argument("table samples must be positive");
        if (i > 0 && !(ts[i] > ts[i - 1] && ws[i] < ws[i - 1]))
            throw std::invalid_argument("table samples must be strictly increasing in t and decreasing in omega");
        params.push_back(ts[i]);
        params.push_back(ws[i]);
    }
    return Modulus(ModulusFamily::Table, std::move(params), ts.front());
}

Modulus Modulus::with_domain_start(double start) const {
    Modulus m = *this;
    if (family_ == ModulusFamily::Table) {
        if (start < params_[0]) throw std::invalid_argument("table modulus cannot start before its first sample");
    } else if (family_ == ModulusFamily::Power && !(start > 0)) {
        throw std::invalid_argument("power modulus needs domain_start > 0");
    } else if (!(start >= 0)) {
        throw std::invalid_argument("domain_start must be non-negative");
    }
    m.domain_start_ = start;
    return m;
}

double Modulus::table_ln_eval(double ln_t) const {
    const std::size_t n = params_.size() / 2;
    auto lt = [&](std::size_t i) { return std::log(params_[2 * i]); };
    auto lw = [&](std::size_t i) { return std::log(params_[2 * i + 1]); };
    std::size_t seg = n - 2;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (ln_t <= lt(i + 1)) {
            seg = i;
            break;
        }
    }
    const double slope = (lw(seg + 1) - lw(seg)) / (lt(seg + 1) - lt(seg));
    return lw(seg) + slope * (ln_t - lt(seg));
}

LogValue Modulus::eval(const LogValue& t) const {
    const double lt = ln_of(t);
    const double ls = domain_start_ > 0 ? std::log(domain_start_) : -kInf;
    if (lt < ls) throw DomainError("modulus evaluated below domain_start");
    switch (family_) {
        case ModulusFamily::Power:
            return checked(-params_[0] * lt, "power modulus");
        case ModulusFamily::Log: {
            const double L = log_add_exp(std::log(params_[0]), lt);
            return checked(-std::log(L), "log modulus");
        }
        case ModulusFamily::Exp: {
            const double tt = std::exp(lt);
            return checked(-params_[0] * tt, "exp modulus");
        }
        case ModulusFamily::Table:
            return checked(table_ln_eval(lt), "table modulus");
    }
    throw std::logic_error("unknown modulus family");
}

LogValue Modulus::range_max() const {
    return eval(domain_start_ > 0 ? LogValue::from_double(domain_start_) : LogValue::zero());
}

LogValue Modulus::invert(const LogValue& s) const {
    if (!s.is_positive()) throw RangeError("modulus inverse needs a positive argument");
    const double top = range_max().ln();
    const double ln_s = s.ln();
    if (ln_s > top + 1e-14 * std::max(1.0, std::fabs(top))) throw RangeError("argument above the range of the modulus");
    const double ls = domain_start_ > 0 ? std::log(domain_start_) : -kInf;
    auto clamp_start = [&](double lt) { return std::max(lt, ls); };
    switch (family_) {
        case ModulusFamily::Power:
            return checked(clamp_start(-ln_s / params_[0]), "power inverse");
        case ModulusFamily::Log: {
            const double A = std::exp(-ln_s);
            if (!std::isfinite(A)) throw RangeError("log inverse: result beyond representable range");
            const double shift = params_[0];
            const double lt = A + std::log1p(-shift * std::exp(-A));
            if (lt == -kInf || std::isnan(lt)) {
                if (domain_start_ == 0) return LogValue::zero();
                return LogValue::from_double(domain_start_);
            }
            return checked(clamp_start(lt), "log inverse");
        }
        case ModulusFamily::Exp: {
            const double x = -ln_s;
            if (x <= 0) {
                if (domain_start_ == 0) return LogValue::zero();
                return LogValue::from_double(domain_start_);
            }
            return checked(clamp_start(std::log(x) - std::log(params_[0])), "exp inverse");
        }
        case ModulusFamily::Table: {
            double lo = std::log(params_[0]);
            double hi = std::log(params_[params_.size() - 2]);
            while (table_ln_eval(hi) > ln_s) {
                hi = hi + std::max(1.0, std::fabs(hi));
                if (!std::isfinite(hi) || hi > 1e300) throw RangeError("table inverse: bracket overflow");
            }
            for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (table_ln_eval(mid) > ln_s) lo = mid;
                else hi = mid;
            }
            return checked(0.5 * (lo + hi), "table inverse");
        }
    }
    throw std::logic_error("unknown modulus family");
}

std::optional<std::pair<long, long>> Modulus::rational_exponent() const {
    if (family_ != ModulusFamily::Power) return std::nullopt;
    const double p = params_[0];
    for (long den = 1; den <= 1000; ++den) {
        const double num = p * static_cast<double>(den);
        const double r = std::round(num);
        if (std::fabs(num - r) <= 1e-13 * std::max(1.0, std::fabs(num)) && r >= 1) {
            if (static_cast<double>(static_cast<long>(r)) / static_cast<double>(den) == p)
                return std::make_pair(static_cast<long>(r), den);
        }
    }
    return std::nullopt;
}

bool Modulus::check_invariants(int points) const {
    points = std::max(points, 32);
    const double base = domain_start_ > 0 ? domain_start_ : 1e-3;
    double prev = kInf;
    double first = 0, last = 0;
    for (int i = 0; i < points; ++i) {
        const double t = (i == 0 && domain_start_ == 0) ? 0.0 : base * std::ldexp(1.0, i);
        LogValue v;
        try {
            v = eval(LogValue::from_double(t));
        } catch (const std::exception&) {
            return false;
        }
        if (!v.is_positive() || !std::isfinite(v.ln())) return false;
        if (!(v.ln() < prev)) return false;
        prev = v.ln();
        if (i == 0) first = v.ln();
        last = v.ln();
    }
    return last < first - std::log(2.0);
}

bool Modulus::satisfies_slow_growth() const {
    auto f = [&](int j) {
        const LogValue t = LogValue::from_ln(j * std::log(2.0));
        return t.ln() + eval(t).ln();
    };
    try {
        double prev = f(100);
        for (int j = 110; j <= 200; j += 10) {
            const double cur = f(j);
            if (!(cur > prev)) return false;
            prev = cur;
        }
        return f(200) - f(100) > 1.0;
    } catch (const std::exception&) {
        return false;
    }
}

std::string Modulus::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << family_name(family_);
    if (family_ != ModulusFamily::Table) os << "(" << params_[0] << ")";
    else os << "[" << params_.size() / 2 << " samples]";
    os << "@" << domain_start_;
    return os.str();
}

nlohmann::json Modulus::to_json() const {
    return {{"family", family_name(family_)}, {"params", params_}, {"domain_start", domain_start_}};
}

Modulus Modulus::from_json(const nlohmann::json& j) {
    const std::string fam = j.at("family").get<std::string>();
    const auto params = j.at("params").get<std::vector<double>>();
    const double start = j.value("domain_start", -1.0);
    auto need = [&](std::size_t n) {
        if (params.size() < n) throw std::invalid_argument("modulus JSON: missing params");
    };
    if (fam == "power") {
        need(1);
        return power(params[0], start >= 0 ? start : 1.0);
    }
    if (fam == "log") {
        return log_decay(params.empty() ? std::numbers::e : params[0], start >= 0 ? start : 0.0);
    }
    if (fam == "exp") {
        need(1);
        return exp_decay(params[0], start >= 0 ? start : 0.0);
    }
    if (fam == "table") {
        if (params.size() % 2 != 0) throw std::invalid_argument("modulus JSON: table params must be (t, w) pairs");
        std::vector<double> ts, ws;
        for (std::size_t i = 0; i < params.size(); i += 2) {
            ts.push_back(params[i]);
            ws.push_back(params[i + 1]);
        }
        Modulus m = table(ts, ws);
        if (start >= 0) m = m.with_domain_start(start);
        return m;
    }
    throw std::invalid_argument("modulus JSON: unknown family '" + fam + "'");
}

Modulus Modulus::parse(const std::string& spec) {
    std::string body = spec;
    double start = -1.0;
    if (auto at = body.find('@'); at != std::string::npos) {
        start = std::stod(body.substr(at + 1));
        body = body.substr(0, at);
    }
    std::string name = body, arg;
    if (auto colon = body.find(':'); colon != std::string::npos) {
        name = body.substr(0, colon);
        arg = body.substr(colon + 1);
    }
    auto num = [&](double dflt) {
        if (arg.empty()) return dflt;
        if (auto slash = arg.find('/'); slash != std::string::npos)
            return std::stod(arg.substr(0, slash)) / std::stod(arg.substr(slash + 1));
        return std::stod(arg);
    };
    if (name == "power") {
        if (arg.empty()) throw std::invalid_argument("power modulus needs an exponent, e.g. power:0.5");
        return power(num(0), start >= 0 ? start : 1.0);
    }
    if (name == "log") return log_decay(num(std::numbers::e), start >= 0 ? start : 0.0);
    if (name == "exp") return exp_decay(num(1.0), start >= 0 ? start : 0.0);
    throw std::invalid_argument("unknown modulus spec '" + spec + "'");
}

LogValue eval_modulus(const Modulus& w, const LogValue& t) { return w.eval(t); }
LogValue invert_modulus(const Modulus& w, const LogValue& s) { return w.invert(s); }

namespace {

void require_t_ge_one(const LogValue& t) {
    if (!t.is_positive() || t.ln() < 0) throw DomainError("omega1 needs t >= 1");
}

// t * ln t for t >= 1 given as LogValue, overflow-checked.
double t_ln_t(const LogValue& t) {
    const double v = std::exp(t.ln()) * t.ln();
    if (!std::isfinite(v)) throw RangeError("omega1: t ln t beyond representable range");
    return v;
}

}  // namespace

LogValue omega1_halfspace(const Modulus& w, const LogValue& t) {
    require_t_ge_one(t);
    const LogValue arg = checked(-1.0 - 2.0 * t_ln_t(t), "omega1 argument");
    const LogValue inv = w.invert(arg);
    return checked(-std::log(4.0 * std::numbers::pi) - inv.ln(), "omega1_halfspace");
}

LogValue omega1_family(const Modulus& w, const LogValue& t, double delta0, double A0, double tau0) {
    require_t_ge_one(t);
    if (!(delta0 > 0 && A0 > 0 && tau0 > 0)) throw std::invalid_argument("omega1_family needs positive constants");
    const LogValue arg = checked(std::log(0.375 * tau0) - t_ln_t(t), "omega1 argument");
    const LogValue inv = w.invert(arg);
    return checked(std::log(delta0 / (2.0 * std::numbers::pi * A0)) - inv.ln(), "omega1_family");
}

LogValue omega1_halfspace_stage(const Modulus& w, const LogValue& t, int k) {
    require_t_ge_one(t);
    if (k < 1) throw std::invalid_argument("stage index must be >= 1");
    const LogValue arg = checked(-1.0 - 2.0 * k * t.ln(), "omega1 argument");
    const LogValue inv = w.invert(arg);
    return checked(-std::log(4.0 * std::numbers::pi) - inv.ln(), "omega1_halfspace_stage");
}

LogValue omega1_family_stage(const Modulus& w, const LogValue& t, int k, double delta0, double A0,
                             double tau0) {
    require_t_ge_one(t);
    if (k < 1) throw std::invalid_argument("stage index must be >= 1");
    if (!(delta0 > 0 && A0 > 0 && tau0 > 0)) throw std::invalid_argument("omega1_family needs positive constants");
    const LogValue arg = checked(std::log(0.375 * tau0) - k * t.ln(), "omega1 argument");
    const LogValue inv = w.invert(arg);
    return checked(std::log(delta0 / (2.0 * std::numbers::pi * A0)) - inv.ln(), "omega1_family_stage");
}

}  // namespace slowhom
