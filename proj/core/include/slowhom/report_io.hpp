#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slowhom/halfspace.hpp"

namespace slowhom {

inline constexpr int kSchemaVersion = 1;

// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& content);

struct ScheduleRow {
    int k = 0;
    double ln_t_k = 0, ln_S = 0, ln_omega = 0, margin = 0;
};

std::vector<ScheduleRow> schedule_rows(const ScheduleCertificate& sc);
nlohmann::json schedule_to_json(const ScheduleCertificate& sc);
std::vector<ScheduleRow> schedule_rows_from_json(const nlohmann::json& j);

// CSV with header "k,ln_t_k,ln_S,ln_omega,margin"; values in %.17e.
void emit_plot_data(const std::vector<ScheduleRow>& rows, const std::string& path);
std::vector<ScheduleRow> parse_schedule_csv(const std::string& path);

std::string format_double(double x);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header = nullptr);

}  // namespace slowhom
