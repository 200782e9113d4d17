#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "slowhom/log_value.hpp"
#include "slowhom/modulus.hpp"

namespace slowhom {

using IntVector = std::vector<mpz_class>;

IntVector make_int_vector(std::initializer_list<long> coords);
mpz_class dot(const IntVector& a, const IntVector& b);
mpz_class norm_sq(const IntVector& a);
bool is_zero(const IntVector& a);
// Natural logs of big numbers, accurate to double precision.
double ln_abs(const mpz_class& z);
double ln_abs(const mpq_class& q);
std::string to_string(const IntVector& v);
nlohmann::json int_vector_to_json(const IntVector& v);
IntVector int_vector_from_json(const nlohmann::json& j);
// mantissa * 2^exponent with a 64-bit mantissa; the exact rational stand-in
// for a LogValue when phases have to be reduced modulo 1.
mpq_class to_rational(const LogValue& v);

// |xi|^2 - (xi . base)^2 / |base|^2, exactly.
mpq_class projection_gap_sq(const IntVector& base, const IntVector& xi);

// Finite-window test of |P xi| >= kappa |xi|^-l over test_set.
bool is_diophantine(const IntVector& base, const mpq_class& kappa, const mpq_class& l,
                    const std::vector<IntVector>& test_set);

struct OrthonormalFrame {
    Eigen::MatrixXd M;  // columns [N | n]
    IntVector generator;

    int dim() const { return static_cast<int>(M.rows()); }
    Eigen::MatrixXd N() const { return M.leftCols(M.cols() - 1); }
    Eigen::VectorXd n() const { return M.col(M.cols() - 1); }
};

// Householder reflection taking e_d to base/|base|.
OrthonormalFrame complete_frame(const IntVector& base);

// N^T xi, computed through the exact rational projection so that huge xi
// with tiny gaps keep full relative precision.
Eigen::VectorXd tangential_components(const OrthonormalFrame& frame, const IntVector& xi);

struct ApproximationFailure : std::runtime_error {
    ApproximationFailure(const std::string& msg, mpz_class largest)
        : std::runtime_error(msg), largest_denominator(std::move(largest)) {}
    mpz_class largest_denominator;
};

// Lattice vector of norm >= min_norm whose direction is within tol of r
// (exact squared-distance comparison), never parallel to r.
IntVector approximate_direction(const IntVector& r, const mpq_class& tol, const mpz_class& min_norm);

// Squared chord distance |a/|a| - b/|b||^2 <= bound_sq, decided exactly.
bool direction_distance_within(const IntVector& a, const IntVector& b, const mpq_class& bound_sq);

// The omega_1 a direction construction enforces at stage k.
struct Omega1 {
    enum class Kind { Plain, Halfspace, Family };

    Kind kind = Kind::Plain;
    Modulus base = Modulus::power(1.0);
    bool stage_aware = false;
    double delta0 = 0, A0 = 0, tau0 = 0;

    static Omega1 plain(const Modulus& w);
    static Omega1 halfspace(const Modulus& w, bool stage_aware);
    static Omega1 family(const Modulus& w, double delta0, double A0, double tau0, bool stage_aware);

    LogValue eval(const LogValue& t, int k) const;
    // omega_1^2(|xi|) = (|xi|^2)^(-num/den) for plain rational powers.
    std::optional<std::pair<long, long>> exact_power() const;

    nlohmann::json to_json() const;
    static Omega1 from_json(const nlohmann::json& j);
};

struct StepBound {
    int stage = 0;
    double ln_bound = 0;               // ln of omega1^2(|xi|) / (b^k |xi|^2)
    std::optional<mpq_class> bound_sq;  // exact square when rational
};

struct DirectionCertificate {
    Omega1 omega1;
    std::vector<IntVector> stages;
    long gap_base = 10;
    mpq_class rho{1, 2};
    std::vector<StepBound> step_bounds;
    bool complete = true;
    int failed_stage = -1;
    std::string failure;

    int K() const { return static_cast<int>(stages.size()) - 1; }
    const IntVector& normal() const { return stages.back(); }
};

struct ConstructionOptions {
    // Refuse stages whose required norm exceeds e^max_ln_norm.
    double max_ln_norm = 2.0e6;
    // Exhaustive minimal-norm refinement when the search box is this small.
    long exhaustive_box_limit = 400000;
};

DirectionCertificate construct_bad_direction(const Omega1& omega1, int K, const IntVector& seed, long gap_base,
                                             const mpq_class& rho, const ConstructionOptions& opts = {});

struct CheckRecord {
    int stage = 0;
    std::string kind;
    double lhs_ln = 0;
    double rhs_ln = 0;
    bool pass = false;
    bool exact = false;
};

struct VerificationReport {
    bool pass = true;
    std::vector<CheckRecord> checks;
};

VerificationReport verify_direction_certificate(const DirectionCertificate& cert);

nlohmann::json certificate_to_json(const DirectionCertificate& cert, const VerificationReport* report = nullptr);
DirectionCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace slowhom
