#pragma once

#include <string>
#include <vector>

#include "mbm/config.hpp"

namespace mbm::validate {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the full acceptance suite, writing one report file per criterion plus
// validate_summary.csv under cfg.out_dir. Tolerances are fixed in code.
std::vector<CriterionResult> run_all(const ExperimentConfig& cfg);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace mbm::validate
