#pragma once

#include <string>
#include <vector>

#include "mfp/config.hpp"
#include "mfp/stats.hpp"

namespace mfp {

struct SuiteResult {
    std::string suite;
    std::vector<TestReport> reports;

    bool pass() const;
    std::vector<std::string> failing_names() const;
};

// scaling-family, lmf-law, inverse-lamperti, cascade-measures, cascade-cf,
// covariance, mellin
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg, int workers);

// expands "all"; preserves the listed order
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names,
                                    const ExperimentConfig& cfg, int workers);

}  // namespace mfp
