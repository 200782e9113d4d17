#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowhom/bem.hpp"
#include "slowhom/domain.hpp"
#include "slowhom/family.hpp"
#include "slowhom/modulus.hpp"

namespace slowhom {

struct DecayProbe {
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<bool> resolved;
    double slope = 0;
    double ln_C = 0;  // |I| ~ C lambda^slope
};

// I(lambda) = int over the curved part of P(s) A cos(2 pi xi . (lambda M y(s) + y0)) ds.
DecayProbe curved_decay_probe(const Domain& domain, const std::function<double(double)>& weight, const Vec2& xi,
                              const Eigen::Matrix2d& M, const Vec2& y0, const std::vector<double>& lambdas,
                              double amplitude = 1.0);

// Least-squares slope and intercept of ln|v| against ln lambda.
std::pair<double, double> loglog_fit(const std::vector<double>& lambdas, const std::vector<double>& values);

Eigen::Matrix2d random_rotation(std::uint64_t seed);

struct DemoConfig {
    PrototypeParams domain{1.1, 0.05, 5.0, 1.0};
    Modulus omega = Modulus::power(0.5);
    long gap_base = 2;
    int bem_nodes = 1024;
    int sample_points = 5;
    std::vector<double> eps_grid{0.1, 0.05, 0.025};
    bool stage_aware = true;

    nlohmann::json to_json() const;
    static DemoConfig from_json(const nlohmann::json& j);
};

struct DemoPoint {
    Vec2 x;
    double u = 0, I1 = 0, I2 = 0, I2_envelope = 0, split_error = 0;
    double margin_direct = 0, margin = 0;
    bool resolved = true;
    bool pass = false;
};

struct DemoReport {
    nlohmann::json domain;
    Vec2 b0_center;
    double b0_radius = 0, inradius = 0;
    double portion_mass_inf = 0;  // inf over a grid in B0 of the flat-part mass
    FamilyConstants constants;
    DirectionCertificate cert;
    bool cert_verified = false;
    std::vector<FamilyReport> family_reports;
    LogValue lambda1;
    double omega_lambda1 = 0;
    double torus_mean = 0;  // c0(g); u0 is identically zero when it vanishes
    std::vector<DemoPoint> points;
    DecayProbe curved_fit;  // at the centroid, lambda in multiples of lambda1
    std::vector<double> eps_grid, u_eps;
    bool trend_decreasing = false;
    bool part_a_pass = false;
    bool inconclusive = false;
    double seconds = 0;

    nlohmann::json to_json() const;
};

DemoReport run_dirichlet_demo(const DemoConfig& cfg);

}  // namespace slowhom
