#include "mbm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbm::theory {

bool condition_19(double a, double b) {
    if (!(a > 0.0 && a <= b && b < 1.0))
        throw std::invalid_argument("condition_19: need 0 < a <= b < 1");
    return 1.0 - b > (1.0 - a) * (1.0 - a / b);
}

ExponentReport exponent_bound(double a, double b, double beta, int ell, double epsilon_slack,
                              int grid_resolution) {
    if (!(a > 0.0 && a <= b && b < 1.0))
        throw std::invalid_argument("exponent_bound: need 0 < a <= b < 1");
    if (!(beta > 0.0)) throw std::invalid_argument("exponent_bound: beta must be > 0");
    if (ell < 2) throw std::invalid_argument("exponent_bound: ell must be >= 2");
    if (!(epsilon_slack > 0.0) || epsilon_slack >= 1.0)
        throw std::invalid_argument("exponent_bound: epsilon_slack in (0,1)");
    if (grid_resolution < 10)
        throw std::invalid_argument("exponent_bound: grid_resolution too small");

    const double L = double(ell) - 1.0 - epsilon_slack;
    auto objective = [&](double eta, double gamma) {
        double f1 = a + eta * beta;
        double f2 = (1.0 - gamma) + gamma * a;
        double f3 = (gamma - eta) * L + gamma * a;
        return std::min(f1, std::min(f2, f3));
    };

    double lo_e = 0.0, hi_e = 1.0, lo_g = 0.0, hi_g = 1.0;
    double best = -1e300, be = 0.0, bg = 0.0;
    int res = grid_resolution;
    for (int round = 0; round < 9; ++round) {
        double se = (hi_e - lo_e) / (res - 1);
        double sg = (hi_g - lo_g) / (res - 1);
        for (int ig = 0; ig < res; ++ig) {
            double gamma = lo_g + ig * sg;
            for (int ie = 0; ie < res; ++ie) {
                double eta = lo_e + ie * se;
                if (!(eta < gamma)) break;  // grids ascend; eta >= gamma stays so
                double v = objective(eta, gamma);
                if (v > best) {
                    best = v;
                    be = eta;
                    bg = gamma;
                }
            }
        }
        lo_e = std::max(0.0, be - 3.0 * se);
        hi_e = std::min(1.0, be + 3.0 * se);
        lo_g = std::max(0.0, bg - 3.0 * sg);
        hi_g = std::min(1.0, bg + 3.0 * sg);
        res = 201;
    }

    ExponentReport rep;
    rep.a = a;
    rep.b = b;
    rep.beta = beta;
    rep.ell = ell;
    rep.epsilon_slack = epsilon_slack;
    rep.eta_star = be;
    rep.gamma_star = bg;
    rep.constraint_values = {a + be * beta, (1.0 - bg) + bg * a, (bg - be) * L + bg * a};
    rep.d = std::min(best, 1.0);
    rep.feasible = rep.d > b;
    return rep;
}

std::vector<RegionCell> region_raster(int resolution) {
    if (resolution < 10) throw std::invalid_argument("region_raster: resolution must be >= 10");
    std::vector<RegionCell> cells;
    cells.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        double a = (i + 0.5) / resolution;
        for (int j = 0; j < resolution; ++j) {
            double b = (j + 0.5) / resolution;
            // cells with a > b lie outside {0 < a <= b < 1} and hence outside D
            cells.push_back({a, b, a <= b && condition_19(a, b)});
        }
    }
    return cells;
}

}  // namespace mbm::theory
