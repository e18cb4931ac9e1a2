#pragma once

#include <cstdint>
#include <vector>

#include "mbm/hurst.hpp"
#include "mbm/noise.hpp"
#include "mbm/psi.hpp"
#include "mbm/synthesis.hpp"

namespace mbm::analysis {

// c(theta) = int_R |e^{i xi} - 1|^2 |xi|^{-2 theta - 1} d xi, computed once per
// theta by quadrature (series near 0, Gauss-Legendre on [1,128], asymptotic
// integration-by-parts tail) and cached. c(0.5) = 2 pi.
double fbm_scale_constant(double theta);

// c(theta)/2 (|s|^{2H} + |t|^{2H} - |s-t|^{2H}); theta in (0,1).
double fbm_covariance(double s, double t, double theta);

// Exact-in-law fBm on a uniform grid via circulant embedding of the increment
// covariance; independent of the wavelet synthesis path. Throws when the
// embedding is not nonnegative-definite.
PathBundle oracle_fbm(double theta, double t0, double dt, int n_points, int replicates,
                      std::uint64_t seed);

struct VariogramReport {
    double anchor = 0.0;
    std::vector<double> lags;
    std::vector<double> msq_increment;
    double slope = 0.0;
    double intercept = 0.0;
    double exponent = 0.0;  // slope/2, capped at 1
    bool zero_variance = false;
};

// Ensemble pointwise-Holder estimate at t: regress log E[(P(t+-h)-P(t))^2]
// (two-sided average) on log h. Needs >= 3 lags with t+-h on the grid.
VariogramReport estimate_pointwise_holder(const PathMatrix& paths,
                                          const std::vector<double>& t_grid, double t,
                                          const std::vector<double>& lags);

struct SmoothnessReport {
    std::vector<double> lags;
    std::vector<double> mean_sup;  // E[sup_{|t1-t0|<=h} |P(t1)-P(t0)|]
    double slope = 0.0;
    double exponent = 0.0;  // slope capped at 1
    bool zero_variance = false;
};

// Uniform-exponent estimate over the grid window [i_lo, i_hi] (uniform spacing
// required); lag_steps are window widths in grid units.
SmoothnessReport smoothness_exponent(const PathMatrix& paths, const std::vector<double>& t_grid,
                                     std::size_t i_lo, std::size_t i_hi,
                                     const std::vector<int>& lag_steps);

enum class Process { mbm, z };

struct TangentReport {
    std::vector<double> rhos;
    std::vector<double> frob_rel_error;
};

// Rescaled-increment law at t versus the tangent fBm(H(t)) covariance on
// u_grid: Frobenius-relative error per rho.
TangentReport tangent_convergence(const HurstFunction& H, double t,
                                  const std::vector<double>& rho_list,
                                  const std::vector<double>& u_grid, Process proc,
                                  const SynthesisConfig& base_cfg, const NoiseLattice& lattice,
                                  const PsiTable& table);

// Truncated A_n(t,theta): sum over j in [0, j_max], k in the union of the
// window |k - 2^j t| <= k_window and the anchor |k| <= k_window, of
// |d_theta^n g_{j,k}(t,theta)| sqrt(log(3 + j + |k|)).
double truncated_A_n(double t, double theta, int n, int j_max, int k_window,
                     const PsiTable& table);

// Truncated G_n: summand |H(k/2^j) - H(t0)|^n sqrt(log(3+j+|k|))
// |d_theta^n g_{j,k}(t1,theta) - d_theta^n g_{j,k}(t0,theta)|, n >= 1.
double truncated_G_n(double t0, double t1, double theta, int n, const HurstFunction& H,
                     int j_max, int k_window, const PsiTable& table);

// Two-sample Kolmogorov-Smirnov distance and the asymptotic critical value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical(double alpha, std::size_t n, std::size_t m);

// One-sample KS distance against N(0, sigma^2).
double ks_statistic_normal(std::vector<double> a, double sigma);

double normal_cdf(double x);

// Least-squares slope/intercept of y against x.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mbm::analysis
