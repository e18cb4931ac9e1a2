#pragma once

#include <cstdint>
#include <vector>

#include "mbm/hurst.hpp"
#include "mbm/noise.hpp"
#include "mbm/psi.hpp"

namespace mbm {

struct SynthesisConfig {
    int j_min = -20;
    int j_max = 16;
    int k_window = 50;
    std::vector<double> t_grid;  // strictly increasing
    int replicates = 1;
    int threads = 0;
    bool components = false;  // also keep the j<0 / j>=0 partial sums
};

struct PathMatrix {
    std::size_t reps = 0, nt = 0;
    std::vector<double> data;

    PathMatrix() = default;
    PathMatrix(std::size_t r, std::size_t n) : reps(r), nt(n), data(r * n, 0.0) {}
    double& at(std::size_t r, std::size_t i) { return data[r * nt + i]; }
    double at(std::size_t r, std::size_t i) const { return data[r * nt + i]; }
    bool empty() const { return data.empty(); }
};

// Sampled trajectories; a component is empty unless the producing operation
// fills it. full = low + high holds bitwise, as does R = Z - X.
struct PathBundle {
    std::vector<double> t_grid;
    std::uint64_t seed = 0;
    SynthesisConfig config;
    PathMatrix b;                // fixed-theta field B(., theta)
    PathMatrix x, x_low, x_high; // mBm and its frequency components
    PathMatrix z, z_low, z_high;
    PathMatrix r;                // Z - X
};

// d^n/dtheta^n g_{j,k}(t,theta), g_{j,k} = 2^{-j theta}{Psi(2^j t-k,theta)-Psi(-k,theta)};
// n >= 1 by the Leibniz expansion with factors C(n,p)(-j log2)^p (0^0 = 1).
double g_jk(double t, double theta, int j, std::int64_t k, int n, const PsiTable& table);

// B(., theta): truncated wavelet sum over j in [j_min, j_max], window
// |k - 2^j t| <= k_window plus the anchor set |k| <= k_window feeding the
// Psi(-k, theta) terms. Includes the 1/sqrt(2pi) factor that makes
// Var B(t, theta) = c(theta) |t|^{2 theta}.
PathBundle synthesize_field(double theta, const SynthesisConfig& cfg,
                            const NoiseLattice& lattice, const PsiTable& table);

// mBm: theta slots replaced by H(t).
PathBundle synthesize_mbm(const HurstFunction& H, const SynthesisConfig& cfg,
                          const NoiseLattice& lattice, const PsiTable& table);

// Z: theta slots replaced per-term by H(k/2^j).
PathBundle synthesize_z(const HurstFunction& H, const SynthesisConfig& cfg,
                        const NoiseLattice& lattice, const PsiTable& table);

// X, Z from the same lattice draw, plus R = Z - X.
PathBundle synthesize_residual(const HurstFunction& H, const SynthesisConfig& cfg,
                               const NoiseLattice& lattice, const PsiTable& table);

}  // namespace mbm
