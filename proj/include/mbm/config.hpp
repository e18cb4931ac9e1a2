#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbm/hurst.hpp"

namespace mbm {

struct HurstConfig {
    std::string kind = "constant";
    double value = 0.6;
    double mean = 0.5, amp = 0.3, freq = 1.0, phase = 0.0;
    double lo = 0.3, hi = 0.7, center = 0.5, rate = 8.0;
    std::string nodes;    // piecewise: "t:h,t:h,..."
    std::string breaks;   // step: "t1,t2,..."
    std::string values;   // step/table: "h0,h1,..."
    double t0 = 0.0, t1 = 1.0;  // table sampling range
};

struct PsiConfig {
    double x_max = 256.0;
    double x_step = 0.03125;
    int theta_nodes = 32;
    int quadrature_points = 2048;
    int n_max = 2;
    double theta_lo = 0.0;  // 0 = derive from the Hurst range
    double theta_hi = 0.0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    int threads = 0;
    double a = 0.45, b = 0.55;
    double beta = 1.0;
    int ell = 4;
    double epsilon_slack = 1e-3;
    int grid_resolution = 2000;
    int j_min = -20;
    int j_max = 16;
    int k_window = 50;
    double t_start = 0.0, t_end = 1.0;
    int t_points = 1025;
    int replicates = 2000;
    bool components = false;
    std::vector<double> lags;  // default 2^-9..2^-4
    std::string out_dir = "./out";
    HurstConfig hurst;
    PsiConfig psi;
    // subcommand-specific
    std::vector<double> holder_points{0.1, 0.25, 0.4, 0.6, 0.9};
    double tangent_t = 0.4;
    std::vector<double> tangent_rhos;  // default 2^-4..2^-8
    std::vector<double> tangent_u{-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};
    double diag_t = 0.3;
    double diag_theta = 0.5;
    int diag_n = 1;
    int diag_j_max = 20;
    int region_resolution = 101;

    std::vector<std::pair<std::string, std::string>> echo;  // parsed key/value pairs
};

// Flat `key = value` document, '#' comments. Unknown keys and cross-field
// violations are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

HurstFunction make_hurst(const ExperimentConfig& cfg);

// Lag-ladder syntax "2^-9..2^-4" or a comma list of reals; returns ascending.
std::vector<double> parse_lags(const std::string& text);

}  // namespace mbm
