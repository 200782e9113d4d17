#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowhom/log_value.hpp"

namespace slowhom {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct RangeError : std::range_error {
    using std::range_error::range_error;
};

enum class ModulusFamily { Power, Log, Exp, Table };

// Strictly decreasing omega: [domain_start, inf) -> (0, inf) with limit 0.
//   Power(p):    t^-p
//   Log(shift):  1 / ln(shift + t), shift >= e
//   Exp(c):      e^(-c t)
//   Table:       log-log linear interpolation of (t_i, w_i), extrapolated
//                with the last segment's slope
class Modulus {
public:
    static Modulus power(double p, double domain_start = 1.0);
    static Modulus log_decay(double shift = 2.718281828459045, double domain_start = 0.0);
    static Modulus exp_decay(double c, double domain_start = 0.0);
    static Modulus table(std::vector<double> ts, std::vector<double> ws);

    ModulusFamily family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    double domain_start() const { return domain_start_; }

    LogValue eval(const LogValue& t) const;
    LogValue invert(const LogValue& s) const;
    // omega(domain_start), the top of the range.
    LogValue range_max() const;

    // Power(p) with p = num/den for small integers, used for exact checks.
    std::optional<std::pair<long, long>> rational_exponent() const;

    Modulus with_domain_start(double start) const;

    // Grid check of positivity, finiteness and strict decrease (>= 32 points).
    bool check_invariants(int points = 48) const;
    // t * omega(t) grows without bound, judged on a geometric grid.
    bool satisfies_slow_growth() const;

    std::string describe() const;
    nlohmann::json to_json() const;
    static Modulus from_json(const nlohmann::json& j);
    // "power:0.5", "log", "log:3", "exp:1", optionally "@start" suffix.
    static Modulus parse(const std::string& spec);

private:
    Modulus(ModulusFamily f, std::vector<double> params, double start);
    double table_ln_eval(double ln_t) const;

    ModulusFamily family_ = ModulusFamily::Power;
    std::vector<double> params_;
    double domain_start_ = 1.0;
};

LogValue eval_modulus(const Modulus& w, const LogValue& t);
LogValue invert_modulus(const Modulus& w, const LogValue& s);

// 1 / (4 pi omega^-1(e^-1 t^-2t)), t >= 1.
LogValue omega1_halfspace(const Modulus& w, const LogValue& t);
// (delta0 / (2 pi A0)) / omega^-1((3/8) tau0 t^-t), t >= 1.
LogValue omega1_family(const Modulus& w, const LogValue& t, double delta0, double A0, double tau0);

// Same formulas with the exponent t in t^-2t (resp. t^-t) replaced by the
// stage index k; used for finite-stage constructions.
LogValue omega1_halfspace_stage(const Modulus& w, const LogValue& t, int k);
LogValue omega1_family_stage(const Modulus& w, const LogValue& t, int k, double delta0, double A0,
                             double tau0);

}  // namespace slowhom
