#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mfp/stats.hpp"

namespace mfp {

using Json = nlohmann::ordered_json;

// 17 significant digits; round-trips double exactly
std::string format_double(double x);

std::string iso8601_now();

struct CsvWriter {
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(std::span<const double> row);
    void add_row(std::uint64_t id, std::span<const double> rest);
    // first line is an isolated '# generated <timestamp>' header
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

Json to_json(const TestReport& report);
Json to_json(const MomentScalingReport& report);

// JSON text with "generated_at" isolated on its own line at the top
void write_report_json(const std::filesystem::path& path, Json body);

}  // namespace mfp
