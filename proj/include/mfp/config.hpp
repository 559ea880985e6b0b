#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfp/cascade.hpp"
#include "mfp/lmf.hpp"

namespace mfp {

// invalid config; message carries "file:line:" anchoring
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::uint64_t seed = 42;
    std::optional<LmfModel> lmf;
    std::optional<CascadeSpec> cascade;
    std::vector<double> times;
    std::size_t ensemble = 20000;
    std::vector<double> q_grid = {0.5, 1.0, 2.0, 3.0};
    std::vector<std::string> suites = {"all"};
    std::string out_dir;  // empty = resolve via --out flag, MFP_OUT env, then "out"

    const LmfModel& lmf_model() const;
    const CascadeSpec& cascade_spec() const;
};

// MBM-analog preset sigma=0.5, T=1; dyadic times 2^-8..1; default cascade spec
ExperimentConfig default_config();

ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace mfp
