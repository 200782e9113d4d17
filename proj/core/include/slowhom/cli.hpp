#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace slowhom::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct RunConfig {
    std::string subcommand;
    std::string omega = "power:0.5";
    std::string omega1 = "halfspace";
    int dim = 2;
    int stages = 4;
    long gap_base = 10;
    std::string rho = "1/2";
    std::vector<long> seed_vector;
    std::vector<std::string> profiles{"gaussian"};
    std::string policy = "signed";
    std::string config_path;
    std::string input;
    std::string out;
    std::string csv;
    std::string curve_csv;
    std::string decay_csv;
    std::uint64_t seed = 1;

    nlohmann::json to_json() const;
};

// Returns the process exit code; never throws.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace slowhom::cli
