#include "mfp/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace mfp {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvWriter::add_row(std::span<const double> row) {
    if (row.size() != columns_.size()) throw std::invalid_argument("CsvWriter: column mismatch");
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        line += format_double(row[i]);
    }
    rows_.push_back(std::move(line));
}

void CsvWriter::add_row(std::uint64_t id, std::span<const double> rest) {
    if (rest.size() + 1 != columns_.size()) throw std::invalid_argument("CsvWriter: column mismatch");
    std::string line = std::to_string(id);
    for (const double x : rest) {
        line += ',';
        line += format_double(x);
    }
    rows_.push_back(std::move(line));
}

void CsvWriter::write(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "# generated " << iso8601_now() << "\r\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << "\r\n";
    for (const auto& row : rows_) out << row << "\r\n";
}

Json to_json(const TestReport& report) {
    Json j;
    j["name"] = report.name;
    j["statistic"] = report.statistic;
    j["p_value"] = report.p_value;
    j["threshold"] = report.threshold;
    j["pass"] = report.pass;
    if (!report.detail.empty()) j["detail"] = report.detail;
    return j;
}

Json to_json(const MomentScalingReport& report) {
    Json j;
    j["q_grid"] = report.q_grid;
    j["tau_hat"] = report.slopes;
    j["tau_se"] = report.slope_ses;
    j["theory"] = report.theory;
    j["pass"] = report.pass;
    j["time_grid"] = report.time_grid;
    j["q_range"] = {report.q_range.lo, report.q_range.hi};
    j["tolerance_floor"] = report.tolerance_floor;
    j["warnings"] = report.warnings;
    j["all_pass"] = report.all_pass();
    return j;
}

void write_report_json(const std::filesystem::path& path, Json body) {
    Json wrapped;
    wrapped["generated_at"] = iso8601_now();
    for (auto& [key, value] : body.items()) wrapped[key] = std::move(value);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << wrapped.dump(2) << "\n";
}

}  // namespace mfp
