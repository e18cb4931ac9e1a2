#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mbm/meyer.hpp"

namespace mbm {

struct PsiTableConfig {
    double x_max = 256.0;
    double x_step = 1.0 / 32.0;
    double theta_lo = 0.0;  // must be set, 0 < theta_lo < theta_hi < 1
    double theta_hi = 0.0;
    int theta_nodes = 32;
    int max_dtheta_order = 2;
    int quadrature_points = 2048;
    // Beyond x_max evaluation falls back to direct quadrature; beyond far_cutoff
    // the value is below c2*(2+|x|)^-4 ~ 1e-14 and is returned as 0.
    double far_cutoff = 8192.0;
    int threads = 0;
};

// Precomputed grid of Psi(x,theta) = 2 int_{2pi/3}^{8pi/3} cos((x+1/2)xi)
// chi(xi) xi^{-theta-1/2} dxi and its theta-derivatives (integrand factor
// (-log xi)^n). Uniform grid in x, Chebyshev-Gauss nodes in theta; evaluation
// is 10-point local Lagrange in x, barycentric in theta.
class PsiTable {
public:
    PsiTable(const MeyerWindow& window, const PsiTableConfig& cfg);

    // d^n/dtheta^n Psi(x, theta). Throws std::invalid_argument for n beyond
    // max_dtheta_order or theta outside the table range.
    double value(double x, double theta, int n = 0) const;

    // Direct quadrature, bypassing the table (node count scales with |x|).
    double direct(double x, double theta, int n = 0) const;

    // Empirical sup over the table of (2+|x|)^ell |d_theta^n Psi|; ell >= 2.
    double localization_constant(int ell, int n) const;

    const PsiTableConfig& config() const { return cfg_; }
    const MeyerWindow& window() const { return window_; }
    const std::vector<double>& theta_nodes() const { return theta_nodes_; }
    int x_count() const { return nx_; }
    double x_at(int i) const { return -cfg_.x_max + i * cfg_.x_step; }
    double stored(int n, int ix, int itheta) const {
        return values_[(static_cast<std::size_t>(n) * nx_ + ix) * theta_nodes_.size() + itheta];
    }

    bool save(const std::filesystem::path& file) const;
    // Returns the cached table only when every header field matches cfg/window.
    static std::optional<PsiTable> load(const std::filesystem::path& file,
                                        const MeyerWindow& window, const PsiTableConfig& cfg);

private:
    PsiTable(const MeyerWindow& window, const PsiTableConfig& cfg, bool build);
    void check_args(double theta, int n) const;
    double interpolate(double x, double theta, int n) const;

    MeyerWindow window_;
    PsiTableConfig cfg_;
    int nx_ = 0;
    std::vector<double> theta_nodes_;
    std::vector<double> bary_weights_;
    std::vector<double> values_;  // (n, x, theta) row-major
};

}  // namespace mbm
