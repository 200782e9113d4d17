#include "slowhom/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slowhom/dirichlet.hpp"
#include "slowhom/family.hpp"
#include "slowhom/halfspace.hpp"
#include "slowhom/report_io.hpp"

namespace slowhom::cli {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

nlohmann::json metadata() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {{"generated_at", buf}, {"version", "0.1.0"}};
}

nlohmann::json envelope(const RunConfig& cfg, const std::string& verdict) {
    return {{"schema_version", kSchemaVersion}, {"config", cfg.to_json()}, {"verdict", verdict}};
}

void write_json(const std::string& path, nlohmann::json j) {
    j["metadata"] = metadata();
    const std::string text = j.dump(2) + "\n";
    if (path.empty() || path == "-")
        std::cout << text;
    else
        atomic_write(path, text);
}

Modulus parse_omega(const std::string& spec) {
    try {
        return Modulus::parse(spec);
    } catch (const std::exception& e) {
        throw UsageError(std::string("--omega: ") + e.what());
    }
}

mpq_class parse_rho(const std::string& s) {
    try {
        mpq_class q(s);
        q.canonicalize();
        if (q <= 0 || q >= 1) throw UsageError("--rho must lie in (0, 1)");
        return q;
    } catch (const std::invalid_argument&) {
        throw UsageError("--rho: expected a rational p/q");
    }
}

IntVector seed_vector(const RunConfig& cfg) {
    IntVector v(cfg.dim);
    if (cfg.seed_vector.empty()) {
        v[0] = 1;
        return v;
    }
    if (static_cast<int>(cfg.seed_vector.size()) != cfg.dim) throw UsageError("--seed-vector must have --dim entries");
    for (int i = 0; i < cfg.dim; ++i) v[i] = cfg.seed_vector[i];
    if (is_zero(v)) throw UsageError("--seed-vector must be nonzero");
    return v;
}

Omega1 make_omega1(const RunConfig& cfg, const Modulus& w) {
    if (cfg.omega1 == "plain") return Omega1::plain(w);
    if (cfg.omega1 == "halfspace") return Omega1::halfspace(w, true);
    if (cfg.omega1 == "halfspace-uniform") return Omega1::halfspace(w, false);
    throw UsageError("--omega1 must be plain, halfspace or halfspace-uniform");
}

int cmd_direction(const RunConfig& cfg) {
    const Modulus w = parse_omega(cfg.omega);
    const auto cert = construct_bad_direction(make_omega1(cfg, w), cfg.stages, seed_vector(cfg), cfg.gap_base,
                                              parse_rho(cfg.rho));
    const auto vr = verify_direction_certificate(cert);
    const bool ok = cert.complete && vr.pass;
    auto j = envelope(cfg, ok ? "pass" : "fail");
    j["direction"] = certificate_to_json(cert, &vr);
    write_json(cfg.out, j);
    return ok ? kPass : kFail;
}

void write_decay_curve(const BoundaryData& data, const ScheduleCertificate& sc, const std::string& path) {
    const double lo = sc.t.front().ln() - std::log(10.0), hi = sc.t.back().ln() + std::log(10.0);
    const int n = 200;
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= n; ++i) {
        const double lt = lo + (hi - lo) * i / n;
        const LogValue S = eval_S(data, LogValue::from_ln(lt));
        rows.push_back({lt, S.is_zero() ? -INFINITY : S.ln()});
    }
    write_csv(path, {"ln_t", "ln_S"}, rows);
}

int cmd_halfspace(const RunConfig& cfg) {
    const Modulus w = parse_omega(cfg.omega);
    const Omega1 om = make_omega1(cfg, w);
    const auto cert = construct_bad_direction(om, cfg.stages, seed_vector(cfg), cfg.gap_base, parse_rho(cfg.rho));
    const auto vr = verify_direction_certificate(cert);
    nlohmann::json j;
    if (!cert.complete || !vr.pass) {
        j = envelope(cfg, "fail");
        j["direction"] = certificate_to_json(cert, &vr);
        write_json(cfg.out, j);
        if (!cfg.csv.empty()) emit_plot_data({}, cfg.csv);
        std::cerr << "direction construction failed: " << cert.failure << "\n";
        return kFail;
    }
    const auto data = build_boundary_data(cert, cfg.stages);
    const auto sc = certify_slow_convergence(data, w, cfg.stages, &om);
    const bool ok = sc.pass && sc.analytic_pass;
    j = envelope(cfg, ok ? "pass" : "fail");
    j["direction"] = certificate_to_json(cert, &vr);
    j["schedule"] = schedule_to_json(sc);
    write_json(cfg.out, j);
    if (!cfg.csv.empty()) emit_plot_data(schedule_rows(sc), cfg.csv);
    if (!cfg.curve_csv.empty()) write_decay_curve(data, sc, cfg.curve_csv);
    return ok ? kPass : kFail;
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
    return Verdict::Pass;
}

int exit_for(Verdict v) {
    switch (v) {
    case Verdict::Pass: return kPass;
    case Verdict::Fail: return kFail;
    case Verdict::Inconclusive: return kInconclusive;
    }
    return kFail;
}

std::vector<std::string> family_header() {
    return {"profile", "k", "ln_lambda", "main", "sigma1_bound", "sigma2_bound", "omega_lambda_k", "margin", "verdict"};
}

void write_family_csv(const nlohmann::json& reports, const std::string& path) {
    std::vector<std::vector<double>> rows;
    for (std::size_t p = 0; p < reports.size(); ++p)
        for (const auto& s : reports[p].at("stages")) {
            const std::string vn = s.at("verdict");
            rows.push_back({static_cast<double>(p), s.at("k").get<double>(), s.at("ln_lambda").get<double>(),
                            s.at("main").get<double>(), s.at("sigma1_bound").get<double>(),
                            s.at("sigma2_bound").get<double>(), s.at("omega_lambda_k").get<double>(),
                            s.at("margin").get<double>(), vn == "pass" ? 0.0 : vn == "fail" ? 1.0 : 3.0});
        }
    write_csv(path, family_header(), rows);
}

int cmd_family(const RunConfig& cfg) {
    if (cfg.dim != 2) throw UsageError("family-certify supports --dim 2 only");
    const Modulus w = parse_omega(cfg.omega);
    std::vector<Profile> reps;
    for (const auto& p : cfg.profiles) {
        try {
            reps.push_back(parse_profile(p));
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--profile: ") + e.what());
        }
    }
    if (cfg.policy != "signed" && cfg.policy != "positive" && cfg.policy != "uniform")
        throw UsageError("--policy must be signed, positive or uniform");
    const FamilyConstants fc = compute_family_constants(reps);
    const Omega1 om = family_omega1(w, fc, true);
    const auto cert = construct_bad_direction(om, cfg.stages, seed_vector(cfg), cfg.gap_base, fc.rho);
    const auto vr = verify_direction_certificate(cert);
    nlohmann::json j;
    if (!cert.complete || !vr.pass) {
        j = envelope(cfg, "fail");
        j["constants"] = fc.to_json();
        j["direction"] = certificate_to_json(cert, &vr);
        write_json(cfg.out, j);
        std::cerr << "direction construction failed: " << cert.failure << "\n";
        return kFail;
    }
    SignedSpectrum base;
    if (cfg.policy == "uniform") {
        try {
            base = build_uniform_v0(reps, cert, w, fc, cfg.stages);
        } catch (const UniformFailure& e) {
            j = envelope(cfg, "fail");
            j["constants"] = fc.to_json();
            j["direction"] = certificate_to_json(cert, &vr);
            j["failure"] = e.what();
            write_json(cfg.out, j);
            return kFail;
        }
    } else {
        base = spectrum_from_certificate(cert, cfg.stages);
        if (cfg.policy == "positive") base.policy = SignPolicy::Positive;
    }
    Verdict overall = Verdict::Pass;
    nlohmann::json reports = nlohmann::json::array();
    nlohmann::json spectra = nlohmann::json::array();
    for (const auto& F : reps) {
        SignedSpectrum spec = base;
        const FamilyReport rep = certify_family_slow(F, spec, w, fc);
        overall = combine(overall, rep.verdict);
        nlohmann::json rj = rep.to_json();
        rj["profile"] = F.spec;
        reports.push_back(rj);
        spectra.push_back(spec.to_json());
    }
    j = envelope(cfg, verdict_name(overall));
    j["constants"] = fc.to_json();
    j["direction"] = certificate_to_json(cert, &vr);
    j["spectra"] = spectra;
    j["family"] = reports;
    write_json(cfg.out, j);
    if (!cfg.csv.empty()) write_family_csv(reports, cfg.csv);
    return exit_for(overall);
}

void write_demo_csvs(const nlohmann::json& rep, const RunConfig& cfg) {
    if (!cfg.csv.empty()) {
        std::vector<std::vector<double>> rows;
        const auto& eps = rep.at("part_b").at("eps");
        const auto& u = rep.at("part_b").at("abs_u");
        for (std::size_t i = 0; i < eps.size(); ++i) rows.push_back({eps[i].get<double>(), std::fabs(u[i].get<double>())});
        write_csv(cfg.csv, {"eps", "abs_u_eps"}, rows);
    }
    if (!cfg.decay_csv.empty()) {
        std::vector<std::vector<double>> rows;
        const auto& cf = rep.at("curved_fit");
        for (std::size_t i = 0; i < cf.at("lambdas").size(); ++i)
            rows.push_back({cf["lambdas"][i].get<double>(), std::fabs(cf["abs_I2"][i].get<double>())});
        write_csv(cfg.decay_csv, {"lambda", "abs_I2"}, rows);
    }
}

int cmd_demo(RunConfig cfg) {
    DemoConfig dc;
    nlohmann::json resolved;
    if (!cfg.config_path.empty()) {
        std::ifstream in(cfg.config_path);
        if (!in) throw UsageError("cannot open config file " + cfg.config_path);
        try {
            dc = DemoConfig::from_json(nlohmann::json::parse(in));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(std::string("config file: ") + e.what());
        }
    }
    const DemoReport rep = run_dirichlet_demo(dc);
    const nlohmann::json rj = rep.to_json();
    const bool ok = rep.part_a_pass && rep.trend_decreasing;
    const std::string verdict = rep.inconclusive ? "inconclusive" : ok ? "pass" : "fail";
    auto j = envelope(cfg, verdict);
    j["config"]["demo"] = dc.to_json();
    j["demo"] = rj;
    write_json(cfg.out, j);
    write_demo_csvs(rj, cfg);
    return rep.inconclusive ? kInconclusive : ok ? kPass : kFail;
}

int cmd_plot(const RunConfig& cfg) {
    if (cfg.input.empty() || cfg.csv.empty()) throw UsageError("plot-data needs --input and --csv");
    std::ifstream in(cfg.input);
    if (!in) throw std::runtime_error("cannot open " + cfg.input);
    const auto j = nlohmann::json::parse(in);
    if (j.value("schema_version", 0) != kSchemaVersion) throw UsageError("unsupported schema_version in " + cfg.input);
    if (j.contains("schedule"))
        emit_plot_data(schedule_rows_from_json(j["schedule"]), cfg.csv);
    else if (j.contains("family"))
        write_family_csv(j["family"], cfg.csv);
    else if (j.contains("demo"))
        write_demo_csvs(j["demo"], cfg);
    else if (j.contains("direction"))
        emit_plot_data({}, cfg.csv);
    else
        throw UsageError(cfg.input + " is not a slowhom report");
    return kPass;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
    return {{"subcommand", subcommand}, {"omega", omega},      {"omega1", omega1},   {"dim", dim},
            {"stages", stages},         {"gap_base", gap_base}, {"rho", rho},         {"seed_vector", seed_vector},
            {"profiles", profiles},     {"policy", policy},     {"config_path", config_path},
            {"outputs", {{"out", out}, {"csv", csv}, {"curve_csv", curve_csv}, {"decay_csv", decay_csv}}},
            {"input", input},           {"seed", seed}};
}

int run(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"Certificates for arbitrarily slow convergence in periodic homogenization", "slowhom"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    auto add_common = [&](CLI::App* s) {
        s->add_option("--out", cfg.out, "JSON report path (default: stdout)");
        s->add_option("--seed", cfg.seed, "Seed for randomized grids");
    };
    auto add_direction = [&](CLI::App* s) {
        s->add_option("--omega", cfg.omega, "Modulus spec, e.g. power:0.5, log, exp:1 (family-certify default power:0.25)");
        s->add_option("--dim", cfg.dim, "Dimension")->check(CLI::Range(2, 16));
        s->add_option("--stages", cfg.stages, "Number of stages K (family-certify default 3)")->check(CLI::Range(1, 64));
        s->add_option("--gap-base", cfg.gap_base, "Per-step budget base b (family-certify default 2)")->check(CLI::Range(2L, 1000000L));
        s->add_option("--seed-vector", cfg.seed_vector, "Initial lattice vector")->delimiter(',');
    };

    auto* dir = app.add_subcommand("direction", "Construct and verify a non-Diophantine direction certificate");
    add_direction(dir);
    dir->add_option("--omega1", cfg.omega1, "plain | halfspace | halfspace-uniform");
    dir->add_option("--rho", cfg.rho, "Chord radius factor p/q in (0,1)");
    add_common(dir);

    auto* hs = app.add_subcommand("halfspace-certify", "Half-space boundary-layer slow-convergence certificate");
    add_direction(hs);
    hs->add_option("--omega1", cfg.omega1, "plain | halfspace | halfspace-uniform");
    hs->add_option("--rho", cfg.rho, "Chord radius factor p/q in (0,1)");
    hs->add_option("--csv", cfg.csv, "Schedule CSV (k, ln_t_k, ln_S, ln_omega, margin)");
    hs->add_option("--curve-csv", cfg.curve_csv, "Decay curve CSV (ln_t, ln_S)");
    add_common(hs);

    auto* fam = app.add_subcommand("family-certify", "Family-of-integrals lower-bound certificate");
    add_direction(fam);
    fam->add_option("--profile", cfg.profiles, "Profile spec(s): gaussian[:amp:width], bump:r, poisson:h");
    fam->add_option("--policy", cfg.policy, "signed | positive | uniform");
    fam->add_option("--csv", cfg.csv, "Per-stage CSV");
    add_common(fam);

    auto* demo = app.add_subcommand("dirichlet-demo", "2-D Dirichlet slow-homogenization demonstration");
    demo->add_option("--config", cfg.config_path, "JSON config file")->check(CLI::ExistingFile);
    demo->add_option("--csv", cfg.csv, "CSV of (eps, |u_eps|) at the centroid");
    demo->add_option("--decay-csv", cfg.decay_csv, "CSV of (lambda, |I2(lambda)|)");
    add_common(demo);

    auto* plot = app.add_subcommand("plot-data", "Regenerate CSV plot data from a JSON report");
    plot->add_option("--input", cfg.input, "JSON report")->required()->check(CLI::ExistingFile);
    plot->add_option("--csv", cfg.csv, "Output CSV")->required();
    plot->add_option("--decay-csv", cfg.decay_csv, "Second CSV for demo reports");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    if (fam->parsed()) {
        if (fam->count("--stages") == 0) cfg.stages = 3;
        if (fam->count("--gap-base") == 0) cfg.gap_base = 2;
        if (fam->count("--omega") == 0) cfg.omega = "power:0.25";
    }
    try {
        if (dir->parsed()) return cfg.subcommand = "direction", cmd_direction(cfg);
        if (hs->parsed()) return cfg.subcommand = "halfspace-certify", cmd_halfspace(cfg);
        if (fam->parsed()) return cfg.subcommand = "family-certify", cmd_family(cfg);
        if (demo->parsed()) return cfg.subcommand = "dirichlet-demo", cmd_demo(cfg);
        if (plot->parsed()) return cfg.subcommand = "plot-data", cmd_plot(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const FamilyRejection& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kUsage;
}

int run(int argc, const char* const* argv) {
    return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace slowhom::cli
