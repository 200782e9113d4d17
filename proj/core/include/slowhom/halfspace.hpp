#pragma once

#include <vector>

#include <Eigen/Dense>

#include "slowhom/lattice.hpp"
#include "slowhom/log_value.hpp"
#include "slowhom/modulus.hpp"

namespace slowhom {

// One symmetric pair +-xi with a real coefficient; gap data is taken
// against `normal` of the owning BoundaryData.
struct SpectralMode {
    int stage = 0;
    IntVector xi;
    LogValue c;
    mpq_class gap_sq;       // |N^T xi|^2, exact
    double ln_gap = 0;      // ln |N^T xi| (-inf when parallel)
    Eigen::VectorXd tang;  // N^T xi
};

struct BoundaryData {
    std::vector<SpectralMode> modes;
    bool symmetric = true;
    IntVector normal;
    OrthonormalFrame frame;

    int dim() const { return static_cast<int>(normal.size()); }
    bool check_invariants() const;
};

// Modes +-xi^(k), k <= K, with c = |xi^(k)|^-k, gaps against the last stage.
BoundaryData build_boundary_data(const DirectionCertificate& cert, int K);
BoundaryData boundary_data_from_modes(const std::vector<std::pair<IntVector, LogValue>>& modes,
                                      const IntVector& normal, const std::vector<int>& stages = {});
// Same spectrum, gaps recomputed against another normal.
BoundaryData rebase(const BoundaryData& data, const IntVector& normal);

// sum_k 2 c_k e^{-2 pi g_k t} cos(2 pi xi_k . theta)
double eval_V(const BoundaryData& data, const std::vector<double>& theta, const LogValue& t);
// sum_k 2 c_k^2 e^{-4 pi g_k t}
LogValue eval_S(const BoundaryData& data, const LogValue& t);

// ln of e^{-a g t}, -inf once the exponent underflows everything.
double ln_decay(double a, double ln_gap, const LogValue& t);

LogValue schedule_tk(const Modulus& w, const BoundaryData& data, int k);

struct ScheduleCertificate {
    std::vector<LogValue> t;
    std::vector<LogValue> S;
    std::vector<LogValue> omega;
    std::vector<double> margins;
    std::vector<double> analytic_margins;
    bool pass = true;
    bool analytic_pass = true;
};

ScheduleCertificate certify_slow_convergence(const BoundaryData& data, const Modulus& w, int K,
                                             const Omega1* omega1 = nullptr);

// v(y' + lambda n) for tangential y' (|y'.n| <= 1e-12 |y'|).
double eval_halfspace_solution(const BoundaryData& data, const Eigen::VectorXd& y_tangential, const LogValue& lambda);
LogValue eval_halfspace_solution_log(const BoundaryData& data, const Eigen::VectorXd& y_tangential,
                                     const LogValue& lambda);
// v at a general point y with y.n > 0.
double eval_halfspace_point(const BoundaryData& data, const Eigen::VectorXd& y);

BoundaryData trim_for_radius(const BoundaryData& data, double R);

struct HarmonicityReport {
    double max_residual = 0;
    double envelope = 0;
    bool within_envelope = false;
};

HarmonicityReport harmonicity_residual(const BoundaryData& data, const std::vector<Eigen::VectorXd>& samples, double h);

}  // namespace slowhom
