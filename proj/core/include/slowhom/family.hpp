#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include "slowhom/lattice.hpp"
#include "slowhom/log_value.hpp"
#include "slowhom/modulus.hpp"
#include "slowhom/profile.hpp"

namespace slowhom {

struct FamilyConstants {
    double tau0 = 0;
    double eps0 = 0;
    double A0 = 0;
    double delta0 = 0;
    mpq_class rho;
    double sup_l1 = 0;  // sup over representatives of ||F||_1

    nlohmann::json to_json() const;
};

struct FamilyRejection : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

FamilyConstants compute_family_constants(const std::vector<Profile>& reps);

// The omega_1 a family direction construction has to enforce.
Omega1 family_omega1(const Modulus& w, const FamilyConstants& fc, bool stage_aware = true);

// lambda_k = omega^-1((3/8) tau0 |xi^(k)|^-k)
LogValue schedule_lambda(const Modulus& w, double tau0, const IntVector& xi_k, int k);

// ln of 2 pi lambda A0 |N^T xi|, compared against ln delta0 by callers.
double ln_phase_product(const LogValue& lambda, double A0, double ln_gap);

struct SpectrumMode {
    int stage = 0;       // index into the direction certificate (1-based)
    IntVector xi;
    LogValue c;          // magnitude |c_xi|
    int eps = 1;         // sign for the signed variant
    mpq_class phase = 0; // coefficient of xi is eps c e^{2 pi i phase}, turns
    double ln_gap = 0;
    double tang = 0;     // N^T xi (d - 1 = 1)
};

enum class SignPolicy { Signed, Positive };

struct SignedSpectrum {
    std::vector<SpectrumMode> modes;
    IntVector normal;
    SignPolicy policy = SignPolicy::Signed;
    std::vector<int> indices;  // i_k of the uniform variant

    nlohmann::json to_json() const;
};

// Modes xi^(1..K) of the certificate, c = |xi^(k)|^-k, signs to be chosen.
SignedSpectrum spectrum_from_certificate(const DirectionCertificate& cert, int K);

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

struct FamilyStageReport {
    int k = 0;
    int stage = 0;
    LogValue lambda;
    double ln_scale = 0;  // ln c_k; the fields below are divided by c_k
    double main = 0;
    double main_error = 0;
    double sigma1_bound = 0;
    double sigma1_error = 0;
    double sigma2_bound = 0;
    double omega_lambda = 0;
    double margin = 0;
    double ln_phase = 0;
    bool phase_ok = true;
    int eps = 1;
    std::string sigma1_backend;
    Verdict verdict = Verdict::Pass;
};

struct FamilyReport {
    std::vector<FamilyStageReport> stages;
    Verdict verdict = Verdict::Pass;
    bool phase_ok = true;

    nlohmann::json to_json() const;
};

// Runs the lower-bound certificate on `spec`. Signs of the Signed policy are
// chosen here (stage by stage) and written back to `spec`. With a nonzero X0
// the integrand is v0(lambda_k M (x, 0) + lambda_k X0).
FamilyReport certify_family_slow(const Profile& F, SignedSpectrum& spec, const Modulus& w,
                                 const FamilyConstants& fc, const std::vector<double>& X0 = {});

struct UniformFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Positive-coefficient spectrum on a subsequence i_k of the certificate
// stages, i_1 = 1, each i_k minimal with the cross-term condition.
SignedSpectrum build_uniform_v0(const std::vector<Profile>& reps, const DirectionCertificate& cert, const Modulus& w,
                                const FamilyConstants& fc, int K);

// Multiply each coefficient by e^{-2 pi i lambda_m xi^(m) . X0} (exact mod 1).
SignedSpectrum build_shifted_v0(const SignedSpectrum& spec, const std::vector<double>& X0,
                                const std::vector<LogValue>& lambdas);

// Upper bound on |int F e^{2 pi i lambda x gap}| for ball-supported F.
double compact_support_crossterm_bound(const Profile& F, double gap, double lambda);

struct WeylSample {
    double lambda = 0;
    double value = 0;
    double error = 0;
    double bound = 0;
    bool within_bound = true;
};

struct WeylReport {
    double mean_term = 0;  // c0(H) int F
    std::vector<WeylSample> samples;
};

// H = h0 + 2 c cos(2 pi xi . theta); v(lambda) = int F(x) H(lambda x N) dx.
WeylReport weyl_average_test(const Profile& F, double h0, double c, const IntVector& xi, const IntVector& normal,
                             const std::vector<double>& lambdas);

}  // namespace slowhom
