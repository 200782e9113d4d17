#include "slowhom/dirichlet.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "slowhom/parallel.hpp"
#include "slowhom/quadrature.hpp"

namespace slowhom {

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json vec_json(const Vec2& v) { return {v.x(), v.y()}; }

}  // namespace

std::pair<double, double> loglog_fit(const std::vector<double>& lambdas, const std::vector<double>& values) {
    if (lambdas.size() != values.size() || lambdas.size() < 2) throw std::invalid_argument("loglog_fit: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double x = std::log(lambdas[i]), y = std::log(std::fabs(values[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

Eigen::Matrix2d random_rotation(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double a = std::uniform_real_distribution<double>(0.0, 2 * kPi)(rng);
    Eigen::Matrix2d R;
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return R;
}

DecayProbe curved_decay_probe(const Domain& domain, const std::function<double(double)>& weight, const Vec2& xi,
                              const Eigen::Matrix2d& M, const Vec2& y0, const std::vector<double>& lambdas,
                              double amplitude) {
    DecayProbe p;
    p.lambdas = lambdas;
    const Vec2 freq = M.transpose() * xi;
    const double phase0 = xi.dot(y0);
    for (double lam : lambdas) {
        double total = 0;
        bool ok = true;
        if (amplitude != 0 && xi.norm() > 0) {
            for (const auto& [a, b] : domain.curved_windows()) {
                const double cycles = lam * freq.norm() * (b - a);
                const int pieces = static_cast<int>(std::ceil(2 * cycles)) + 4;
                for (int i = 0; i < pieces; ++i) {
                    const double s0 = a + (b - a) * i / pieces, s1 = a + (b - a) * (i + 1) / pieces;
                    const QuadResult q = integrate_gk(
                        [&](double s) {
                            const Vec2 y = domain.point(s);
                            return weight(s) * std::cos(2 * kPi * (lam * freq.dot(y) + phase0));
                        },
                        s0, s1, 1e-15, 1e-12, 2000);
                    total += q.value;
                    ok = ok && q.converged;
                }
            }
        }
        p.values.push_back(amplitude * total);
        p.resolved.push_back(ok);
    }
    bool any_zero = false;
    for (double v : p.values) any_zero = any_zero || v == 0;
    if (!any_zero && lambdas.size() >= 2) std::tie(p.slope, p.ln_C) = loglog_fit(p.lambdas, p.values);
    return p;
}

nlohmann::json DemoConfig::to_json() const {
    return {{"domain", domain.to_json()},       {"omega", omega.to_json()},
            {"gap_base", gap_base},             {"bem_nodes", bem_nodes},
            {"sample_points", sample_points},   {"eps_grid", eps_grid},
            {"stage_aware", stage_aware}};
}

DemoConfig DemoConfig::from_json(const nlohmann::json& j) {
    DemoConfig c;
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        c.domain.flat_len = d.value("flat_len", c.domain.flat_len);
        c.domain.blend = d.value("blend", c.domain.blend);
        c.domain.gamma = d.value("gamma", c.domain.gamma);
        c.domain.power = d.value("power", c.domain.power);
    }
    if (j.contains("omega")) {
        c.omega = j["omega"].is_string() ? Modulus::parse(j["omega"].get<std::string>()) : Modulus::from_json(j["omega"]);
    }
    c.gap_base = j.value("gap_base", c.gap_base);
    c.bem_nodes = j.value("bem_nodes", c.bem_nodes);
    c.sample_points = j.value("sample_points", c.sample_points);
    c.eps_grid = j.value("eps_grid", c.eps_grid);
    c.stage_aware = j.value("stage_aware", c.stage_aware);
    return c;
}

nlohmann::json DemoReport::to_json() const {
    nlohmann::json j;
    j["domain"] = domain;
    j["b0"] = {{"center", vec_json(b0_center)}, {"radius", b0_radius}, {"inradius", inradius}};
    j["portion_mass_inf"] = portion_mass_inf;
    j["constants"] = constants.to_json();
    VerificationReport vr = verify_direction_certificate(cert);
    j["direction"] = certificate_to_json(cert, &vr);
    j["family"] = nlohmann::json::array();
    for (const auto& f : family_reports) j["family"].push_back(f.to_json());
    j["ln_lambda1"] = lambda1.ln();
    j["omega_lambda1"] = omega_lambda1;
    j["torus_mean"] = torus_mean;
    j["points"] = nlohmann::json::array();
    for (const auto& p : points)
        j["points"].push_back({{"x", vec_json(p.x)},
                               {"u", p.u},
                               {"I1", p.I1},
                               {"I2", p.I2},
                               {"I2_envelope", p.I2_envelope},
                               {"split_error", p.split_error},
                               {"margin_direct", p.margin_direct},
                               {"margin", p.margin},
                               {"resolved", p.resolved},
                               {"pass", p.pass}});
    j["curved_fit"] = {{"lambdas", curved_fit.lambdas},
                       {"abs_I2", curved_fit.values},
                       {"slope", curved_fit.slope},
                       {"ln_C", curved_fit.ln_C},
                       {"reference_slope", -0.5}};
    j["part_b"] = {{"eps", eps_grid}, {"abs_u", u_eps}, {"decreasing", trend_decreasing}};
    j["part_a_pass"] = part_a_pass;
    j["inconclusive"] = inconclusive;
    return j;
}

DemoReport run_dirichlet_demo(const DemoConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.sample_points < 1) throw std::invalid_argument("run_dirichlet_demo: need at least one sample point");
    DemoReport rep;
    const Domain base = build_prototype_domain(cfg.domain);
    const double half = 0.5 * cfg.domain.flat_len;

    // B0: centroid, a quarter of the inradius.
    rep.inradius = base.inradius().first;
    rep.b0_center = base.centroid();
    rep.b0_radius = 0.25 * rep.inradius;
    if (base.distance_to_boundary(rep.b0_center) <= rep.b0_radius)
        throw std::runtime_error("run_dirichlet_demo: B0 is not compactly inside the domain");
    std::vector<Vec2> xs{rep.b0_center};
    for (int i = 1; i < cfg.sample_points; ++i) {
        const double a = 2 * kPi * (i - 1) / (cfg.sample_points - 1);
        xs.push_back(rep.b0_center + rep.b0_radius * Vec2(std::cos(a), std::sin(a)));
    }

    const NystromSolver base_solver(base, cfg.bem_nodes);
    rep.portion_mass_inf = std::numeric_limits<double>::infinity();
    for (int ri = 0; ri <= 2; ++ri)
        for (int ai = 0; ai < (ri == 0 ? 1 : 8); ++ai) {
            const double a = 2 * kPi * ai / 8;
            const Vec2 x = rep.b0_center + 0.5 * ri * rep.b0_radius * Vec2(std::cos(a), std::sin(a));
            rep.portion_mass_inf = std::min(rep.portion_mass_inf, poisson_portion_mass(base_solver, x, -half, half));
        }

    // Profile family: Poisson kernels of the sample points restricted to the flat side.
    std::vector<Profile> profiles;
    for (const auto& x : xs) {
        const PoissonDensity rho(base_solver, x);
        const int m = 2000;
        std::vector<double> vals(m + 1);
        for (int i = 0; i <= m; ++i) vals[i] = rho(-half + cfg.domain.flat_len * i / m);
        profiles.push_back(tabulated_profile(-half, half, vals));
    }
    rep.constants = compute_family_constants(profiles);

    const Omega1 om1 = family_omega1(cfg.omega, rep.constants, cfg.stage_aware);
    rep.cert = construct_bad_direction(om1, 1, make_int_vector({1, 0}), cfg.gap_base, rep.constants.rho);
    if (!rep.cert.complete) throw std::runtime_error("run_dirichlet_demo: direction construction failed: " + rep.cert.failure);
    rep.cert_verified = verify_direction_certificate(rep.cert).pass;

    // Rotate so that the flat side lies on {y . n = 0} with the domain in y . n > 0.
    const Vec2 n = complete_frame(rep.cert.normal()).n();
    Eigen::Matrix2d R;
    R.col(0) = Vec2(n.y(), -n.x());
    R.col(1) = n;
    const Domain dom = base.transformed(R, Vec2::Zero());
    rep.domain = dom.describe();

    SignedSpectrum spec = spectrum_from_certificate(rep.cert, 1);
    for (const auto& F : profiles) rep.family_reports.push_back(certify_family_slow(F, spec, cfg.omega, rep.constants));
    rep.lambda1 = schedule_lambda(cfg.omega, rep.constants.tau0, spec.modes[0].xi, 1);
    rep.omega_lambda1 = cfg.omega.eval(rep.lambda1).to_double();
    rep.torus_mean = 0;  // no zero mode in the spectrum

    struct Mode {
        Vec2 xi;
        double amp;
    };
    std::vector<Mode> modes;
    double max_freq = 0;
    for (const auto& m : spec.modes) {
        const Vec2 xi(m.xi[0].get_d(), m.xi[1].get_d());
        modes.push_back({xi, 2 * m.eps * std::exp(m.c.ln())});
        max_freq = std::max(max_freq, xi.norm());
    }
    auto data = [&](double lam) {
        return [&, lam](const Vec2& y) {
            double v = 0;
            for (const auto& md : modes) v += md.amp * std::cos(2 * kPi * lam * md.xi.dot(y));
            return v;
        };
    };

    const NystromSolver solver(dom, cfg.bem_nodes);
    const double lam1 = rep.lambda1.to_double();
    const double L = dom.length();
    auto fine_nodes = [&](double lam) { return std::max(16384, static_cast<int>(std::ceil(24 * lam * max_freq * L))); };
    const std::vector<double> probe_lams{0.25 * lam1, 0.5 * lam1, lam1, 2 * lam1, 4 * lam1};

    rep.points.resize(xs.size());
    std::vector<DecayProbe> probes(xs.size());
    parallel_for(static_cast<int>(xs.size()), [&](int i) {
        DemoPoint& p = rep.points[i];
        p.x = R * xs[i];
        const PoissonDensity rho(solver, p.x);
        const auto g = data(lam1);
        p.u = rho.integrate(dom, g, fine_nodes(lam1));
        p.I1 = rho.integrate_window(dom, g, -half, half);
        p.I2 = 0;
        for (const auto& [a, b] : dom.curved_windows()) p.I2 += rho.integrate_window(dom, g, a, b);
        p.split_error = std::fabs(p.I1 + p.I2 - p.u);
        double env = 0;
        for (const auto& md : modes) {
            const DecayProbe pr = curved_decay_probe(dom, [&](double s) { return rho(s); }, md.xi,
                                                     Eigen::Matrix2d::Identity(), Vec2::Zero(), probe_lams, md.amp);
            for (bool r : pr.resolved) p.resolved = p.resolved && r;
            const double fitted = std::exp(pr.ln_C + pr.slope * std::log(lam1));
            env += std::max(std::fabs(pr.values[2]), fitted);
            if (i == 0) probes[0] = pr;
        }
        p.I2_envelope = env;
        p.margin_direct = std::fabs(p.u) - rep.omega_lambda1;
        p.margin = std::fabs(p.I1) - p.I2_envelope - rep.omega_lambda1;
        p.resolved = p.resolved && p.split_error <= 1e-6;
        p.pass = p.resolved && p.margin > 0 && p.margin_direct > 0;
    });
    rep.curved_fit = probes[0];

    int passed = 0;
    for (const auto& p : rep.points) {
        passed += p.pass ? 1 : 0;
        rep.inconclusive = rep.inconclusive || !p.resolved;
    }
    rep.part_a_pass = passed == static_cast<int>(rep.points.size()) && passed >= 5;

    // Part b: |u_eps| at the centroid along the eps grid.
    rep.eps_grid = cfg.eps_grid;
    const PoissonDensity rho_c(solver, rep.points[0].x);
    for (double eps : cfg.eps_grid) {
        const double lam = 1 / eps;
        rep.u_eps.push_back(std::fabs(rho_c.integrate(dom, data(lam), fine_nodes(lam))));
    }
    rep.trend_decreasing = true;
    for (std::size_t i = 1; i < rep.u_eps.size(); ++i)
        rep.trend_decreasing = rep.trend_decreasing && rep.u_eps[i] < rep.u_eps[i - 1];
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace slowhom
