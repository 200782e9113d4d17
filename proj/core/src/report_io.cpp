#include "slowhom/report_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace slowhom {

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + ": " + std::strerror(errno));
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp + ": " + std::strerror(errno));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

std::vector<ScheduleRow> schedule_rows(const ScheduleCertificate& sc) {
    std::vector<ScheduleRow> rows;
    for (std::size_t i = 0; i < sc.t.size(); ++i)
        rows.push_back({static_cast<int>(i) + 1, sc.t[i].ln(), sc.S[i].is_zero() ? -std::numeric_limits<double>::infinity() : sc.S[i].ln(),
                        sc.omega[i].ln(), sc.margins[i]});
    return rows;
}

nlohmann::json schedule_to_json(const ScheduleCertificate& sc) {
    nlohmann::json j;
    j["pass"] = sc.pass;
    j["analytic_pass"] = sc.analytic_pass;
    j["stages"] = nlohmann::json::array();
    for (std::size_t i = 0; i < sc.t.size(); ++i)
        j["stages"].push_back({{"k", i + 1},
                               {"ln_t_k", format_double(sc.t[i].ln())},
                               {"ln_S", format_double(sc.S[i].is_zero() ? -INFINITY : sc.S[i].ln())},
                               {"ln_omega", format_double(sc.omega[i].ln())},
                               {"margin", format_double(sc.margins[i])},
                               {"analytic_margin", format_double(sc.analytic_margins[i])}});
    return j;
}

std::vector<ScheduleRow> schedule_rows_from_json(const nlohmann::json& j) {
    std::vector<ScheduleRow> rows;
    for (const auto& s : j.at("stages")) {
        auto num = [&](const char* key) { return std::stod(s.at(key).get<std::string>()); };
        rows.push_back({s.at("k").get<int>(), num("ln_t_k"), num("ln_S"), num("ln_omega"), num("margin")});
    }
    return rows;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << "\n";
    }
    atomic_write(path, out.str());
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>* header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
    std::string line;
    std::vector<std::vector<double>> rows;
    if (!std::getline(in, line)) return rows;
    if (header) {
        header->clear();
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header->push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit_plot_data(const std::vector<ScheduleRow>& rows, const std::string& path) {
    std::vector<std::vector<double>> data;
    for (const auto& r : rows) data.push_back({static_cast<double>(r.k), r.ln_t_k, r.ln_S, r.ln_omega, r.margin});
    write_csv(path, {"k", "ln_t_k", "ln_S", "ln_omega", "margin"}, data);
}

std::vector<ScheduleRow> parse_schedule_csv(const std::string& path) {
    std::vector<std::string> header;
    const auto data = read_csv(path, &header);
    if (header != std::vector<std::string>{"k", "ln_t_k", "ln_S", "ln_omega", "margin"})
        throw std::runtime_error(path + ": unexpected schedule CSV header");
    std::vector<ScheduleRow> rows;
    for (const auto& r : data) {
        if (r.size() != 5) throw std::runtime_error(path + ": malformed schedule row");
        rows.push_back({static_cast<int>(r[0]), r[1], r[2], r[3], r[4]});
    }
    return rows;
}

}  // namespace slowhom
