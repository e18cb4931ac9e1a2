#pragma once

#include <array>
#include <vector>

namespace mbm::theory {

// Condition delimiting the region D: 1 - b > (1 - a)(1 - a b^{-1}), strict.
bool condition_19(double a, double b);

struct ExponentReport {
    double a = 0.0, b = 0.0, beta = 0.0;
    int ell = 0;
    double epsilon_slack = 0.0;
    bool feasible = false;
    double d = 0.0;          // min(max-min exponent, 1)
    double eta_star = 0.0;   // argmax, 0 < eta < gamma < 1 when feasible
    double gamma_star = 0.0;
    // a + eta beta, (1-gamma) + gamma a, (gamma-eta)(ell-1-eps) + gamma a
    std::array<double, 3> constraint_values{};
};

// Maximize min of the three constraint exponents over eta < gamma by grid
// search plus local refinement (the objective is concave piecewise-linear,
// so refinement around the coarse argmax is exact in the limit).
// feasible <=> d > b.
ExponentReport exponent_bound(double a, double b, double beta, int ell,
                              double epsilon_slack = 1e-3, int grid_resolution = 2000);

struct RegionCell {
    double a, b;
    bool feasible;
};

// condition_19 evaluated at cell centers (i+0.5)/resolution, a <= b.
std::vector<RegionCell> region_raster(int resolution);

}  // namespace mbm::theory
