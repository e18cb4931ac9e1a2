#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "mbm/analysis.hpp"
#include "mbm/synthesis.hpp"

using namespace mbm;

namespace {

const PsiTable& shared_table() {
    static MeyerWindow window(3);
    static PsiTableConfig cfg = [] {
        PsiTableConfig c;
        c.x_max = 64.0;
        c.theta_lo = 0.15;
        c.theta_hi = 0.85;
        return c;
    }();
    static PsiTable table(window, cfg);
    return table;
}

SynthesisConfig quick_cfg(std::vector<double> grid, int reps, int j_min = -12, int j_max = 12) {
    SynthesisConfig cfg;
    cfg.j_min = j_min;
    cfg.j_max = j_max;
    cfg.k_window = 50;
    cfg.t_grid = std::move(grid);
    cfg.replicates = reps;
    return cfg;
}

}  // namespace

TEST_CASE("g_jk vanishes at t = 0 and reduces to a psi difference at j = 0") {
    const PsiTable& t = shared_table();
    for (int j : {-3, 0, 2, 7})
        for (std::int64_t k : {-5, 0, 3, 40})
            CHECK(g_jk(0.0, 0.55, j, k, 0, t) == 0.0);
    for (int n : {0, 1, 2}) {
        double got = g_jk(0.87, 0.4, 0, 2, n, t);
        double want = t.value(0.87 - 2.0, 0.4, n) - t.value(-2.0, 0.4, n);
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("g_jk theta-derivative matches a finite difference") {
    const PsiTable& t = shared_table();
    const double d = 1e-5;
    for (auto [j, k] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {5, 17}, {-2, -1}}) {
        double fd = (g_jk(0.6, 0.5 + d, j, k, 0, t) - g_jk(0.6, 0.5 - d, j, k, 0, t)) / (2 * d);
        CHECK(std::abs(g_jk(0.6, 0.5, j, k, 1, t) - fd) < 1e-6);
    }
}

TEST_CASE("field paths vanish at t = 0 exactly") {
    auto bundle = synthesize_field(0.5, quick_cfg({0.0, 0.5, 1.0}, 8), NoiseLattice(3),
                                   shared_table());
    for (std::size_t r = 0; r < bundle.b.reps; ++r) CHECK(bundle.b.at(r, 0) == 0.0);
}

TEST_CASE("brute-force recomputation of the truncated sum") {
    const PsiTable& table = shared_table();
    auto cfg = quick_cfg({0.3, 0.7}, 3, -2, 2);
    cfg.k_window = 8;
    const double theta = 0.45;
    auto bundle = synthesize_field(theta, cfg, NoiseLattice(17), table);
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t r = 0; r < 3; ++r) {
        NoiseLattice lat(17, r);
        for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
            double t = cfg.t_grid[i];
            double total = 0.0;
            for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
                std::int64_t kc = std::int64_t(std::floor(std::ldexp(t, j)));
                double win = 0.0, anchor = 0.0;
                for (std::int64_t k = kc - 8; k <= kc + 8; ++k)
                    win += inv * std::exp2(-j * theta) *
                           table.value(std::ldexp(t, j) - double(k), theta, 0) *
                           lat.epsilon(j, k);
                for (std::int64_t k = -8; k <= 8; ++k)
                    anchor += inv * std::exp2(-j * theta) * table.value(-double(k), theta, 0) *
                              lat.epsilon(j, k);
                total += win - anchor;
            }
            CHECK(std::abs(bundle.b.at(r, i) - total) < 1e-12);
        }
    }
}

TEST_CASE("constant H makes field, X and Z bitwise identical") {
    HurstFunction h = HurstFunction::constant(0.6);
    std::vector<double> grid;
    for (int i = 0; i <= 32; ++i) grid.push_back(double(i) / 32.0);
    auto cfg = quick_cfg(grid, 20);
    auto field = synthesize_field(0.6, cfg, NoiseLattice(5), shared_table());
    auto bundle = synthesize_residual(h, cfg, NoiseLattice(5), shared_table());
    for (std::size_t i = 0; i < bundle.x.data.size(); ++i) {
        CHECK(bundle.x.data[i] == field.b.data[i]);
        CHECK(bundle.z.data[i] == bundle.x.data[i]);
        CHECK(bundle.r.data[i] == 0.0);
    }
}

TEST_CASE("X, Z and R vanish at t = 0; R = Z - X pointwise") {
    HurstFunction h = HurstFunction::sine(0.5, 0.2);
    auto bundle = synthesize_residual(h, quick_cfg({0.0, 0.4, 0.9}, 6), NoiseLattice(2),
                                      shared_table());
    for (std::size_t r = 0; r < bundle.x.reps; ++r) {
        CHECK(bundle.x.at(r, 0) == 0.0);
        CHECK(bundle.z.at(r, 0) == 0.0);
        CHECK(bundle.r.at(r, 0) == 0.0);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(bundle.r.at(r, i) == bundle.z.at(r, i) - bundle.x.at(r, i));
    }
}

TEST_CASE("full equals low plus high bitwise") {
    HurstFunction h = HurstFunction::sine(0.5, 0.2);
    auto cfg = quick_cfg({0.25, 0.5, 0.75}, 5);
    cfg.components = true;
    auto bundle = synthesize_residual(h, cfg, NoiseLattice(9), shared_table());
    for (std::size_t i = 0; i < bundle.x.data.size(); ++i) {
        CHECK(bundle.x.data[i] == bundle.x_low.data[i] + bundle.x_high.data[i]);
        CHECK(bundle.z.data[i] == bundle.z_low.data[i] + bundle.z_high.data[i]);
    }
}

TEST_CASE("paths are exactly linear in the noise amplitude") {
    HurstFunction h = HurstFunction::sine(0.5, 0.2);
    auto cfg = quick_cfg({0.3, 0.8}, 4);
    auto one = synthesize_residual(h, cfg, NoiseLattice(21, 0, 1.0), shared_table());
    auto two = synthesize_residual(h, cfg, NoiseLattice(21, 0, 2.0), shared_table());
    for (std::size_t i = 0; i < one.x.data.size(); ++i) {
        CHECK(two.x.data[i] == 2.0 * one.x.data[i]);
        CHECK(two.z.data[i] == 2.0 * one.z.data[i]);
    }
}

TEST_CASE("Z uses the dyadic H value per term (step function spot check)") {
    // steps at 0.5: terms with k/2^j < 0.5 use 0.35, others the right limit 0.65;
    // verify
    // against a per-term recomputation on a small truncation
    HurstFunction h = HurstFunction::step({0.5}, {0.35, 0.65});
    const PsiTable& table = shared_table();
    auto cfg = quick_cfg({0.7}, 2, -2, 3);
    cfg.k_window = 10;
    auto bundle = synthesize_z(h, cfg, NoiseLattice(31), table);
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t r = 0; r < 2; ++r) {
        NoiseLattice lat(31, r);
        double total = 0.0;
        int checked = 0;
        for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
            std::int64_t kc = std::int64_t(std::floor(std::ldexp(0.7, j)));
            double win = 0.0, anchor = 0.0;
            for (std::int64_t k = kc - 10; k <= kc + 10; ++k) {
                double theta = h.dyadic(k, j);
                CHECK(theta == (std::ldexp(double(k), -j) < 0.5 ? 0.35 : 0.65));
                ++checked;
                win += inv * std::exp2(-j * theta) *
                       table.value(std::ldexp(0.7, j) - double(k), theta, 0) * lat.epsilon(j, k);
            }
            for (std::int64_t k = -10; k <= 10; ++k) {
                double theta = h.dyadic(k, j);
                anchor += inv * std::exp2(-j * theta) * table.value(-double(k), theta, 0) *
                          lat.epsilon(j, k);
            }
            total += win - anchor;
        }
        CHECK(checked >= 100);
        CHECK(std::abs(bundle.z.at(r, 0) - total) < 1e-12);
    }
}

TEST_CASE("field variance and covariance match the harmonizable law") {
    auto cfg = quick_cfg({0.5, 1.0}, 2000, -20, 16);
    auto bundle = synthesize_field(0.5, cfg, NoiseLattice(0), shared_table());
    double v = 0.0, cov = 0.0;
    for (std::size_t r = 0; r < bundle.b.reps; ++r) {
        v += bundle.b.at(r, 1) * bundle.b.at(r, 1);
        cov += bundle.b.at(r, 0) * bundle.b.at(r, 1);
    }
    v /= double(bundle.b.reps);
    cov /= double(bundle.b.reps);
    // 3-sigma MC tolerances at 2000 replicates (se 3.2% / 3.9%); the pinned 5%
    // law checks run in the acceptance suite at its own sampling layout
    CHECK(std::abs(v / (2.0 * std::numbers::pi) - 1.0) < 0.10);
    double ref = analysis::fbm_covariance(0.5, 1.0, 0.5);
    CHECK(std::abs(cov / ref - 1.0) < 0.12);
}

TEST_CASE("mbm variance tracks c(H(t)) |t|^{2H(t)}") {
    HurstFunction h = HurstFunction::sine(0.5, 0.2);
    auto cfg = quick_cfg({0.25, 0.5, 1.0}, 2000, -20, 16);
    auto bundle = synthesize_mbm(h, cfg, NoiseLattice(0), shared_table());
    for (std::size_t i = 0; i < 3; ++i) {
        double t = cfg.t_grid[i];
        double v = 0.0;
        for (std::size_t r = 0; r < bundle.x.reps; ++r) v += bundle.x.at(r, i) * bundle.x.at(r, i);
        v /= double(bundle.x.reps);
        double ref = analysis::fbm_scale_constant(h(t)) * std::pow(t, 2.0 * h(t));
        CHECK(std::abs(v / ref - 1.0) < 0.10);  // 3 sigma at 2000 replicates
    }
}

TEST_CASE("truncation stability under enlarged (j_max, k_window)") {
    // raising j_max adds fresh scales whose combined std at theta ~ 0.5 is
    // ~4e-3 sigma per the exact tail sum, so the 12 -> 14 jump lands near
    // 1e-2 sigma; the 1e-3 sigma level is reached once j_max ~ 22
    HurstFunction h = HurstFunction::sine(0.5, 0.05);
    double sigma = std::sqrt(analysis::fbm_scale_constant(0.5));
    {
        auto cfg_a = quick_cfg({0.3, 0.6, 0.9}, 20, -12, 12);
        auto cfg_b = cfg_a;
        cfg_b.j_max = 14;
        cfg_b.k_window = 80;
        auto a = synthesize_mbm(h, cfg_a, NoiseLattice(1), shared_table());
        auto b = synthesize_mbm(h, cfg_b, NoiseLattice(1), shared_table());
        for (std::size_t i = 0; i < a.x.data.size(); ++i)
            CHECK(std::abs(a.x.data[i] - b.x.data[i]) < 0.02 * sigma);
    }
    {
        auto cfg_a = quick_cfg({0.3, 0.6, 0.9}, 20, -12, 22);
        auto cfg_b = cfg_a;
        cfg_b.j_max = 24;
        cfg_b.k_window = 80;
        auto a = synthesize_mbm(h, cfg_a, NoiseLattice(1), shared_table());
        auto b = synthesize_mbm(h, cfg_b, NoiseLattice(1), shared_table());
        for (std::size_t i = 0; i < a.x.data.size(); ++i)
            CHECK(std::abs(a.x.data[i] - b.x.data[i]) < 1e-3 * sigma);
    }
}

TEST_CASE("marginal of X(1) is Gaussian (one-sample KS at 1%)") {
    auto cfg = quick_cfg({1.0}, 1000, -16, 14);
    auto bundle = synthesize_field(0.5, cfg, NoiseLattice(4), shared_table());
    // exact standard deviation of the truncated linear form
    const PsiTable& table = shared_table();
    const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double var = 0.0;
    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
        std::int64_t kc = std::int64_t(std::floor(std::ldexp(1.0, j)));
        std::vector<std::pair<std::int64_t, std::int64_t>> ivs;
        if (kc - 50 > 50 + 1) {
            ivs = {{-50, 50}, {kc - 50, kc + 50}};
        } else {
            ivs = {{-50, std::max<std::int64_t>(kc + 50, 50)}};
        }
        for (auto [lo, hi] : ivs)
            for (std::int64_t k = lo; k <= hi; ++k) {
                double coef = 0.0;
                if (std::llabs(k - kc) <= 50)
                    coef += inv * std::exp2(-j * 0.5) *
                            table.value(std::ldexp(1.0, j) - double(k), 0.5, 0);
                if (std::llabs(k) <= 50)
                    coef -= inv * std::exp2(-j * 0.5) * table.value(-double(k), 0.5, 0);
                var += coef * coef;
            }
    }
    std::vector<double> samples(bundle.b.reps);
    for (std::size_t r = 0; r < bundle.b.reps; ++r) samples[r] = bundle.b.at(r, 0);
    double d = analysis::ks_statistic_normal(samples, std::sqrt(var));
    CHECK(d < 1.628 / std::sqrt(double(samples.size())));
}

TEST_CASE("config validation") {
    SynthesisConfig cfg;
    cfg.t_grid = {0.5, 0.4};
    CHECK_THROWS_AS(synthesize_field(0.5, cfg, NoiseLattice(0), shared_table()),
                    std::invalid_argument);
    cfg.t_grid = {0.4, 0.5};
    cfg.j_min = 1;
    CHECK_THROWS_AS(synthesize_field(0.5, cfg, NoiseLattice(0), shared_table()),
                    std::invalid_argument);
    cfg = SynthesisConfig{};
    cfg.t_grid = {0.5};
    CHECK_THROWS_AS(synthesize_field(0.05, cfg, NoiseLattice(0), shared_table()),
                    std::invalid_argument);  // theta not covered by the table
}
