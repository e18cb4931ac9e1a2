#include "mbm/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "mbm/analysis.hpp"
#include "mbm/csv.hpp"
#include "mbm/meyer.hpp"
#include "mbm/noise.hpp"
#include "mbm/psi.hpp"
#include "mbm/synthesis.hpp"
#include "mbm/theory.hpp"

namespace mbm::validate {

namespace {

namespace fs = std::filesystem;
using analysis::fbm_covariance;
using analysis::fbm_scale_constant;

constexpr std::uint64_t kOracleSalt = 0x6f7261636c65ULL;

struct Ctx {
    ExperimentConfig cfg;
    MeyerWindow window{3};
    std::vector<std::string> prov;
    PsiTable* table = nullptr;  // x_max 256, theta [0.15, 0.85]

    fs::path out(const std::string& name) const { return fs::path(cfg.out_dir) / name; }
};

PsiTableConfig base_table_config(const ExperimentConfig& cfg, double x_max) {
    PsiTableConfig tc;
    tc.x_max = x_max;
    tc.x_step = cfg.psi.x_step;
    tc.theta_lo = 0.15;
    tc.theta_hi = 0.85;
    tc.theta_nodes = cfg.psi.theta_nodes;
    tc.max_dtheta_order = 2;
    tc.quadrature_points = cfg.psi.quadrature_points;
    tc.threads = cfg.threads;
    return tc;
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::vector<double> dyadic_lags(int e_fine, int e_coarse) {
    std::vector<double> lags;
    for (int e = e_fine; e <= e_coarse; ++e) lags.push_back(std::ldexp(1.0, e));
    return lags;
}

// ---------------------------------------------------------------- criterion 1
CriterionResult criterion_meyer_partition(const Ctx& ctx) {
    CriterionResult res{1, "meyer-partition-of-unity"};
    const int npts = 1000;
    double worst = 0.0, worst_xi = 0.0;
    CsvWriter csv(ctx.out("c01_meyer_partition.csv"), ctx.prov, {"xi", "partition_deviation"});
    for (int i = 0; i < npts; ++i) {
        double lx = -3.0 + 6.0 * double(i) / double(npts - 1);
        double xi = std::pow(10.0, lx);
        double sum = 0.0;
        for (int j = -25; j <= 25; ++j) {
            double c = ctx.window.chi(std::ldexp(xi, j));
            sum += c * c;
        }
        double dev = std::abs(sum - 1.0);
        csv.row({xi, dev});
        if (dev > worst) {
            worst = dev;
            worst_xi = xi;
        }
    }
    csv.close();
    res.pass = worst < 1e-10;
    res.detail = "max |sum chi^2 - 1| = " + fmt(worst, 3) + " at xi = " + fmt(worst_xi, 4) +
                 " (tol 1e-10)";
    return res;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult criterion_psi_symmetry_decay(Ctx& ctx) {
    CriterionResult res{2, "psi-symmetry-and-decay"};
    const PsiTable& t256 = *ctx.table;
    // symmetry on the stored grid: Psi(x) = Psi(-1-x)
    double sym = 0.0;
    const int m = t256.config().theta_nodes;
    const double inv_step = 1.0 / t256.config().x_step;
    for (int ix = 0; ix < t256.x_count(); ++ix) {
        double xm = -1.0 - t256.x_at(ix);
        if (xm < -t256.config().x_max - 1e-12) continue;
        int im = static_cast<int>(std::llround((xm + t256.config().x_max) * inv_step));
        if (im < 0 || im >= t256.x_count()) continue;
        for (int i = 0; i < m; ++i)
            sym = std::max(sym, std::abs(t256.stored(0, ix, i) - t256.stored(0, im, i)));
    }
    bool pass_sym = sym < 1e-10;

    PsiTable t512(ctx.window, base_table_config(ctx.cfg, 512.0));
    CsvWriter csv(ctx.out("c02_psi_decay.csv"), ctx.prov,
                  {"theta", "sup_weighted_256", "sup_weighted_512", "ratio"});
    bool pass_decay = true;
    double worst_ratio = 0.0;
    for (double theta : {0.2, 0.5, 0.8}) {
        auto sup_of = [&](const PsiTable& t) {
            double sup = 0.0;
            for (int ix = 0; ix < t.x_count(); ++ix) {
                double x = t.x_at(ix);
                double w = std::pow(2.0 + std::abs(x), 4.0);
                sup = std::max(sup, w * std::abs(t.value(x, theta, 0)));
            }
            return sup;
        };
        double s256 = sup_of(t256), s512 = sup_of(t512);
        double ratio = s512 / s256;
        worst_ratio = std::max(worst_ratio, ratio);
        csv.row({theta, s256, s512, ratio});
        if (!(std::isfinite(s512) && ratio < 2.0 && ratio > 0.5)) pass_decay = false;
    }
    csv.close();
    res.pass = pass_sym && pass_decay;
    res.detail = "max symmetry gap " + fmt(sym, 3) + " (tol 1e-10); sup ratio on x_max doubling " +
                 fmt(worst_ratio, 4) + " (must be < 2)";
    return res;
}

// ---------------------------------------------------------------- criterion 3
CriterionResult criterion_fbm_covariance(Ctx& ctx) {
    CriterionResult res{3, "fbm-covariance-reproduction"};
    const std::vector<std::pair<double, double>> pairs = {
        {0.25, 0.25}, {0.5, 0.5}, {0.75, 0.75}, {1.0, 1.0},  {0.75, 1.0},
        {0.5, 0.75},  {0.9, 1.0}, {0.25, 0.5},  {0.6, 0.8},  {0.4, 0.5}};
    std::vector<double> grid = {0.25, 0.4, 0.5, 0.6, 0.75, 0.8, 0.9, 1.0};

    SynthesisConfig scfg;
    scfg.j_min = ctx.cfg.j_min;
    scfg.j_max = ctx.cfg.j_max;
    scfg.k_window = ctx.cfg.k_window;
    scfg.t_grid = grid;
    scfg.replicates = 2000;
    scfg.threads = ctx.cfg.threads;

    CsvWriter csv(ctx.out("c03_fbm_covariance.csv"), ctx.prov,
                  {"theta", "s", "t", "empirical", "reference", "rel_error"});
    bool pass = true;
    double worst = 0.0;
    double var_b1 = 0.0;
    for (double theta : {0.3, 0.5, 0.7}) {
        PathBundle bundle =
            synthesize_field(theta, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
        auto idx = [&](double t) {
            return static_cast<std::size_t>(
                std::lower_bound(grid.begin(), grid.end(), t - 1e-12) - grid.begin());
        };
        for (auto [s, t] : pairs) {
            std::size_t is = idx(s), it = idx(t);
            double acc = 0.0;
            for (std::size_t r = 0; r < bundle.b.reps; ++r)
                acc += bundle.b.at(r, is) * bundle.b.at(r, it);
            double emp = acc / double(bundle.b.reps);
            double ref = fbm_covariance(s, t, theta);
            double rel = std::abs(emp / ref - 1.0);
            worst = std::max(worst, rel);
            csv.row({theta, s, t, emp, ref, rel});
            if (rel >= 0.05) pass = false;
            if (theta == 0.5 && s == 1.0 && t == 1.0) var_b1 = emp;
        }
    }
    csv.close();
    double var_rel = std::abs(var_b1 / (2.0 * std::numbers::pi) - 1.0);
    if (var_rel >= 0.05) pass = false;
    res.pass = pass;
    res.detail = "worst pair rel error " + fmt(worst, 4) + " (tol 0.05); Var[B(1,0.5)] = " +
                 fmt(var_b1, 6) + " vs 2pi (rel " + fmt(var_rel, 4) + ")";
    return res;
}

// ---------------------------------------------------------------- criterion 4
CriterionResult criterion_oracle_crossval(Ctx& ctx) {
    CriterionResult res{4, "circulant-oracle-cross-validation"};
    const auto lags = dyadic_lags(-9, -4);
    std::vector<double> grid{1.0};
    for (double h : lags) {
        grid.push_back(0.5 - h);
        grid.push_back(0.5 + h);
    }
    grid.push_back(0.5);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SynthesisConfig scfg;
    scfg.j_min = ctx.cfg.j_min;
    scfg.j_max = ctx.cfg.j_max;
    scfg.k_window = ctx.cfg.k_window;
    scfg.t_grid = grid;
    scfg.replicates = 4000;
    scfg.threads = ctx.cfg.threads;

    CsvWriter csv(ctx.out("c04_oracle_crossval.csv"), ctx.prov,
                  {"theta", "slope_wavelet", "slope_oracle", "slope_gap", "ks_distance",
                   "ks_critical_1pct"});
    bool pass = true;
    double worst_gap = 0.0, worst_ks_margin = 0.0;
    for (double theta : {0.3, 0.5, 0.7}) {
        PathBundle wav = synthesize_field(theta, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
        auto vw = analysis::estimate_pointwise_holder(wav.b, grid, 0.5, lags);

        PathBundle orc = analysis::oracle_fbm(theta, 0.0, std::ldexp(1.0, -9), 513, 8000,
                                              ctx.cfg.seed ^ kOracleSalt);
        auto vo = analysis::estimate_pointwise_holder(orc.b, orc.t_grid, 0.5, lags);
        double gap = std::abs(vw.slope - vo.slope);
        worst_gap = std::max(worst_gap, gap);

        std::vector<double> sw(2000), so(2000);
        std::size_t i1 = grid.size();  // t = 1 is the last grid point
        for (std::size_t r = 0; r < 2000; ++r) sw[r] = wav.b.at(r, i1 - 1);
        for (std::size_t r = 0; r < 2000; ++r) so[r] = orc.b.at(r, 512);
        double d = analysis::ks_statistic(sw, so);
        double crit = analysis::ks_critical(0.01, 2000, 2000);
        worst_ks_margin = std::max(worst_ks_margin, d / crit);
        csv.row({theta, vw.slope, vo.slope, gap, d, crit});
        if (!(gap < 0.03 && d < crit)) pass = false;
    }
    csv.close();
    res.pass = pass;
    res.detail = "worst slope gap " + fmt(worst_gap, 4) + " (tol 0.03); worst KS D/crit " +
                 fmt(worst_ks_margin, 4) + " (must be < 1)";
    return res;
}

// ---------------------------------------------------------------- criterion 5
CriterionResult criterion_constant_reduction(Ctx& ctx) {
    CriterionResult res{5, "constant-H-reduces-to-fbm"};
    SynthesisConfig scfg;
    scfg.j_min = ctx.cfg.j_min;
    scfg.j_max = ctx.cfg.j_max;
    scfg.k_window = ctx.cfg.k_window;
    scfg.replicates = 2000;
    scfg.threads = ctx.cfg.threads;
    const int nt = 257;
    for (int i = 0; i < nt; ++i) scfg.t_grid.push_back(double(i) / double(nt - 1));

    HurstFunction h = HurstFunction::constant(0.6);
    PathBundle bundle = synthesize_residual(h, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
    double max_r = 0.0;
    for (double v : bundle.r.data) max_r = std::max(max_r, std::abs(v));
    CsvWriter csv(ctx.out("c05_constant_residual.csv"), ctx.prov, {"max_abs_residual"});
    csv.row({max_r});
    csv.close();
    res.pass = max_r < 1e-12;
    res.detail = "max |Z - X| = " + fmt(max_r, 3) + " over 2000 replicates x 257 points "
                 "(tol 1e-12)";
    return res;
}

// ---------------------------------------------------------------- criterion 6
CriterionResult criterion_pointwise_holder(Ctx& ctx) {
    CriterionResult res{6, "pointwise-holder-exponent"};
    HurstFunction h = HurstFunction::sine(0.5, 0.3);
    const auto lags = dyadic_lags(-16, -11);
    const std::vector<double> anchors{0.1, 0.25, 0.4, 0.6, 0.9};

    CsvWriter csv(ctx.out("c06_holder.csv"), ctx.prov,
                  {"t", "target", "estimate_x", "estimate_z", "err_x", "err_z"});
    bool pass = true;
    double worst = 0.0;
    for (double t : anchors) {
        SynthesisConfig scfg;
        scfg.j_min = ctx.cfg.j_min;
        scfg.j_max = 24;  // resolves lags down to 2^-16
        scfg.k_window = ctx.cfg.k_window;
        scfg.replicates = 2000;
        scfg.threads = ctx.cfg.threads;
        scfg.t_grid.push_back(t);
        for (double lag : lags) {
            scfg.t_grid.push_back(t - lag);
            scfg.t_grid.push_back(t + lag);
        }
        std::sort(scfg.t_grid.begin(), scfg.t_grid.end());
        PathBundle bundle = synthesize_residual(h, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
        auto vx = analysis::estimate_pointwise_holder(bundle.x, scfg.t_grid, t, lags);
        auto vz = analysis::estimate_pointwise_holder(bundle.z, scfg.t_grid, t, lags);
        double target = h(t);
        double ex = std::abs(vx.exponent - target), ez = std::abs(vz.exponent - target);
        worst = std::max(worst, std::max(ex, ez));
        csv.row({t, target, vx.exponent, vz.exponent, ex, ez});
        if (!(ex < 0.07 && ez < 0.07)) pass = false;
    }
    csv.close();
    res.pass = pass;
    res.detail = "worst |estimate - H(t)| = " + fmt(worst, 4) + " over X and Z at 5 anchors "
                 "(tol 0.07)";
    return res;
}

// ---------------------------------------------------------------- criterion 7
CriterionResult criterion_residual_smoothness(Ctx& ctx) {
    CriterionResult res{7, "residual-smoothness-theorem"};
    HurstFunction h = HurstFunction::sine(0.5, 0.05);
    SynthesisConfig scfg;
    scfg.j_min = ctx.cfg.j_min;
    scfg.j_max = ctx.cfg.j_max;
    scfg.k_window = ctx.cfg.k_window;
    scfg.replicates = 400;
    scfg.threads = ctx.cfg.threads;
    const int nt = 129;  // [0, 0.25] at step 2^-9
    for (int i = 0; i < nt; ++i) scfg.t_grid.push_back(std::ldexp(double(i), -9));

    PathBundle bundle = synthesize_residual(h, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
    std::vector<int> steps{1, 2, 4, 8, 16, 32};
    auto sr = analysis::smoothness_exponent(bundle.r, scfg.t_grid, 0, nt - 1, steps);
    auto sx = analysis::smoothness_exponent(bundle.x, scfg.t_grid, 0, nt - 1, steps);
    auto eb = theory::exponent_bound(0.45, 0.55, 1.0, 4, 1e-3, 2000);

    CsvWriter csv(ctx.out("c07_residual_smoothness.csv"), ctx.prov,
                  {"exponent_r", "exponent_x", "bound_d", "threshold"});
    csv.row({sr.exponent, sx.exponent, eb.d, eb.d - 0.05});
    csv.close();
    bool pass = sr.exponent >= 0.55 + 0.05 && sr.exponent > sx.exponent &&
                sr.exponent >= eb.d - 0.05 && !sr.zero_variance;
    res.pass = pass;
    res.detail = "d(R) = " + fmt(sr.exponent, 4) + ", d(X) = " + fmt(sx.exponent, 4) +
                 ", required >= max(0.60, " + fmt(eb.d - 0.05, 4) + ") and d(R) > d(X)";
    return res;
}

// ---------------------------------------------------------------- criterion 8
CriterionResult criterion_tangent(Ctx& ctx) {
    CriterionResult res{8, "tangent-process-convergence"};
    HurstFunction h = HurstFunction::sine(0.5, 0.05);
    std::vector<double> rhos;
    for (int e = -4; e >= -8; --e) rhos.push_back(std::ldexp(1.0, e));
    std::vector<double> ugrid{-1.0, -0.5, -0.25, 0.25, 0.5, 1.0};

    SynthesisConfig scfg;
    scfg.j_min = ctx.cfg.j_min;
    scfg.j_max = ctx.cfg.j_max;
    scfg.k_window = ctx.cfg.k_window;
    scfg.replicates = 2000;
    scfg.threads = ctx.cfg.threads;

    CsvWriter csv(ctx.out("c08_tangent.csv"), ctx.prov, {"process", "rho", "frob_rel_error"});
    bool pass = true;
    std::string finals;
    for (auto proc : {analysis::Process::mbm, analysis::Process::z}) {
        auto rep = analysis::tangent_convergence(h, 0.4, rhos, ugrid, proc, scfg,
                                                 NoiseLattice(ctx.cfg.seed), *ctx.table);
        const char* name = proc == analysis::Process::mbm ? "X" : "Z";
        for (std::size_t i = 0; i < rep.rhos.size(); ++i)
            csv.row_mixed({name, format_double(rep.rhos[i]),
                           format_double(rep.frob_rel_error[i])});
        for (std::size_t i = 1; i < rep.frob_rel_error.size(); ++i)
            if (rep.frob_rel_error[i] > rep.frob_rel_error[i - 1] + 0.03) pass = false;
        double last = rep.frob_rel_error.back();
        if (!(last < 0.10)) pass = false;
        finals += std::string(name) + ": " + fmt(last, 4) + " ";
    }
    csv.close();
    res.pass = pass;
    res.detail = "final Frobenius rel errors " + finals +
                 "(tol 0.10; sequence non-increasing within 0.03)";
    return res;
}

// ---------------------------------------------------------------- criterion 9
CriterionResult criterion_theory_consistency(Ctx& ctx) {
    CriterionResult res{9, "theory-consistency"};
    // (a) equivalence of exponent_bound feasibility with condition_19, l = 64
    std::vector<std::string> mismatches;
    for (int i = 0; i < 50; ++i) {
        double a = (i + 0.5) / 50.0;
        for (int j = i; j < 50; ++j) {
            double b = (j + 0.5) / 50.0;
            bool c19 = theory::condition_19(a, b);
            auto eb = theory::exponent_bound(a, b, b, 64, 1e-3, 200);
            if (eb.feasible != c19)
                mismatches.push_back("(" + fmt(a, 3) + "," + fmt(b, 3) + ")");
        }
    }
    bool pass_equiv = mismatches.empty();

    // (b) raster flip of row a = 0.5 against the bisection oracle
    double lo = 0.5, hi = 0.999;  // f(lo) > 0 > f(hi) for f = (1-b) - (1-a)(1-a/b)
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (theory::condition_19(0.5, mid))
            lo = mid;
        else
            hi = mid;
    }
    double b_star = 0.5 * (lo + hi);
    auto raster = theory::region_raster(101);
    double last_true = 0.0;
    bool diagonal_ok = true;
    std::vector<double> widths;  // feasible-a width at selected b rows
    for (double brow : {0.81, 0.91, 0.99}) {
        double amin = 2.0, amax = -1.0;
        for (const auto& cell : raster) {
            if (std::abs(cell.b - brow) < 0.5 / 101.0 && cell.feasible) {
                amin = std::min(amin, cell.a);
                amax = std::max(amax, cell.a);
            }
        }
        widths.push_back(amax >= amin ? amax - amin : 0.0);
    }
    for (const auto& cell : raster) {
        if (std::abs(cell.a - 0.5) < 1e-9 && cell.feasible) last_true = std::max(last_true, cell.b);
        if (std::abs(cell.a - cell.b) < 1e-12 && !cell.feasible) diagonal_ok = false;
    }
    bool pass_flip = std::abs(last_true - b_star) <= 1.0 / 101.0 + 1e-12;
    bool pass_qual = diagonal_ok && widths[0] > widths[1] && widths[1] > widths[2];

    CsvWriter csv(ctx.out("c09_region.csv"), ctx.prov, {"a", "b", "feasible"});
    for (const auto& cell : raster)
        csv.row({cell.a, cell.b, cell.feasible ? 1.0 : 0.0});
    csv.close();
    CsvWriter ecsv(ctx.out("c09_equivalence_mismatches.csv"), ctx.prov, {"cell"});
    for (const auto& mm : mismatches) ecsv.row_mixed({mm});
    ecsv.close();

    res.pass = pass_equiv && pass_flip && pass_qual;
    std::string mm = mismatches.empty() ? "none" : std::to_string(mismatches.size());
    if (!mismatches.empty()) {
        mm += " [";
        for (std::size_t i = 0; i < mismatches.size(); ++i)
            mm += mismatches[i] + (i + 1 < mismatches.size() ? " " : "");
        mm += "] - these cells sit within O(1/l) of the boundary of D and need l >> 64";
    }
    res.detail = "equivalence mismatches: " + mm + "; raster flip at b = " + fmt(last_true, 5) +
                 " vs b* = " + fmt(b_star, 5) + " (+-1 cell " + (pass_flip ? "ok" : "FAIL") +
                 "); diagonal+shrink " + (pass_qual ? "ok" : "FAIL");
    return res;
}

// --------------------------------------------------------------- criterion 10
CriterionResult criterion_lemma_diagnostics(Ctx& ctx) {
    CriterionResult res{10, "summability-diagnostics"};
    CsvWriter csv(ctx.out("c10_diagnostics.csv"), ctx.prov, {"quantity", "param", "value"});
    bool pass_a = true;
    std::string adetail;
    for (int n : {0, 1, 2}) {
        double a20 = analysis::truncated_A_n(0.3, 0.5, n, 20, ctx.cfg.k_window, *ctx.table);
        double a24 = analysis::truncated_A_n(0.3, 0.5, n, 24, ctx.cfg.k_window, *ctx.table);
        double rel = std::abs(a24 - a20) / a24;
        csv.row_mixed({"A_" + std::to_string(n) + "_jmax20", "", format_double(a20)});
        csv.row_mixed({"A_" + std::to_string(n) + "_jmax24", "", format_double(a24)});
        csv.row_mixed({"A_" + std::to_string(n) + "_relchange", "", format_double(rel)});
        if (!(rel < 1e-3)) pass_a = false;
        adetail += "n=" + std::to_string(n) + ": " + fmt(rel, 3) + " ";
    }

    HurstFunction h = HurstFunction::sine(0.5, 0.05);
    auto eb = theory::exponent_bound(0.45, 0.55, 1.0, 4, 1e-3, 2000);
    std::vector<double> lx, ly;
    for (int e = -8; e <= -4; ++e) {
        double hh = std::ldexp(1.0, e);
        double g = analysis::truncated_G_n(0.3, 0.3 + hh, 0.5, 1, h, 16, ctx.cfg.k_window,
                                           *ctx.table);
        csv.row_mixed({"G_1", format_double(hh), format_double(g)});
        lx.push_back(std::log(hh));
        ly.push_back(std::log(g));
    }
    double slope = analysis::linear_fit(lx, ly).first;
    csv.row_mixed({"G_1_slope", "", format_double(slope)});
    csv.close();
    bool pass_g = slope >= eb.d - 0.05;
    res.pass = pass_a && pass_g;
    res.detail = "A_n rel change 20->24 " + adetail + "(tol 1e-3, " +
                 (pass_a ? "ok" : "FAIL") + "); G_1 slope " + fmt(slope, 4) +
                 " >= " + fmt(eb.d - 0.05, 4) + " (" + (pass_g ? "ok" : "FAIL") + ")";
    return res;
}

// --------------------------------------------------------------- criterion 11
CriterionResult criterion_noise_envelope(Ctx& ctx) {
    CriterionResult res{11, "noise-envelope"};
    NoiseLattice lat(ctx.cfg.seed);
    const std::int64_t N = 4096;
    std::int64_t exceed = 0;
    double max_ratio = 0.0;
    for (std::int64_t j = -N; j <= N; ++j) {
        for (std::int64_t k = -N; k <= N; ++k) {
            double bound = 6.0 * std::sqrt(std::log(3.0 + std::abs(double(j)) +
                                                    std::abs(double(k))));
            double e = lat.epsilon(j, k);
            double ratio = std::abs(e) / bound;
            if (ratio > max_ratio) max_ratio = ratio;
            if (ratio > 1.0) ++exceed;
        }
    }
    CsvWriter csv(ctx.out("c11_envelope.csv"), ctx.prov,
                  {"lattice_half_width", "exceedances", "max_ratio"});
    csv.row({double(N), double(exceed), max_ratio});
    csv.close();
    res.pass = exceed == 0;
    res.detail = "exceedances of 6 sqrt(log(3+|j|+|k|)) over |j|,|k| <= 4096: " +
                 std::to_string(exceed) + "; max |eps|/bound = " + fmt(max_ratio, 4);
    return res;
}

// --------------------------------------------------------------- criterion 12
void write_determinism_subset(const Ctx& ctx, const fs::path& dir) {
    fs::create_directories(dir);
    // small deterministic artifacts exercising every output path
    {
        CsvWriter csv(dir / "partition.csv", ctx.prov, {"xi", "deviation"});
        for (int i = 0; i < 64; ++i) {
            double xi = std::pow(10.0, -2.0 + 4.0 * i / 63.0);
            double sum = 0.0;
            for (int j = -20; j <= 20; ++j) {
                double c = ctx.window.chi(std::ldexp(xi, j));
                sum += c * c;
            }
            csv.row({xi, std::abs(sum - 1.0)});
        }
        csv.close();
    }
    {
        auto raster = theory::region_raster(101);
        CsvWriter csv(dir / "region.csv", ctx.prov, {"a", "b", "feasible"});
        for (const auto& cell : raster) csv.row({cell.a, cell.b, cell.feasible ? 1.0 : 0.0});
        csv.close();
    }
    {
        auto eb = theory::exponent_bound(0.45, 0.55, 1.0, 4, 1e-3, 2000);
        CsvWriter csv(dir / "exponent.csv", ctx.prov,
                      {"a", "b", "beta", "ell", "feasible", "d", "eta_star", "gamma_star"});
        csv.row({eb.a, eb.b, eb.beta, double(eb.ell), eb.feasible ? 1.0 : 0.0, eb.d, eb.eta_star,
                 eb.gamma_star});
        csv.close();
    }
    {
        double a8 = analysis::truncated_A_n(0.3, 0.5, 1, 8, ctx.cfg.k_window, *ctx.table);
        CsvWriter csv(dir / "a_n.csv", ctx.prov, {"j_max", "value"});
        csv.row({8.0, a8});
        csv.close();
    }
    {
        HurstFunction h = HurstFunction::sine(0.5, 0.05);
        SynthesisConfig scfg;
        scfg.j_min = -12;
        scfg.j_max = 12;
        scfg.k_window = ctx.cfg.k_window;
        scfg.replicates = 200;
        scfg.threads = ctx.cfg.threads;
        for (int i = 0; i < 65; ++i) scfg.t_grid.push_back(double(i) / 64.0);
        PathBundle bundle =
            synthesize_residual(h, scfg, NoiseLattice(ctx.cfg.seed), *ctx.table);
        CsvWriter csv(dir / "paths.csv", ctx.prov, {"replicate", "t", "X", "Z", "R"});
        for (std::size_t r = 0; r < bundle.x.reps; ++r)
            for (std::size_t i = 0; i < bundle.t_grid.size(); ++i)
                csv.row({double(r), bundle.t_grid[i], bundle.x.at(r, i), bundle.z.at(r, i),
                         bundle.r.at(r, i)});
        csv.close();
    }
}

bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

CriterionResult criterion_determinism(Ctx& ctx) {
    CriterionResult res{12, "byte-determinism"};
    fs::path d1 = ctx.out("determinism/run1");
    fs::path d2 = ctx.out("determinism/run2");
    write_determinism_subset(ctx, d1);
    write_determinism_subset(ctx, d2);
    bool pass = true;
    std::string bad;
    for (const char* name : {"partition.csv", "region.csv", "exponent.csv", "a_n.csv",
                             "paths.csv"}) {
        if (!files_identical(d1 / name, d2 / name)) {
            pass = false;
            bad += std::string(name) + " ";
        }
    }
    res.pass = pass;
    res.detail = pass ? "5 report files byte-identical across repeated runs"
                      : "files differ: " + bad;
    return res;
}

}  // namespace

std::vector<CriterionResult> run_all(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    Ctx ctx;
    ctx.cfg = cfg;
    ctx.prov = provenance_lines("validate", cfg.seed, cfg.echo);

    PsiTable table(ctx.window, base_table_config(cfg, 256.0));
    ctx.table = &table;

    std::vector<std::function<CriterionResult(Ctx&)>> criteria = {
        [](Ctx& c) { return criterion_meyer_partition(c); },
        [](Ctx& c) { return criterion_psi_symmetry_decay(c); },
        [](Ctx& c) { return criterion_fbm_covariance(c); },
        [](Ctx& c) { return criterion_oracle_crossval(c); },
        [](Ctx& c) { return criterion_constant_reduction(c); },
        [](Ctx& c) { return criterion_pointwise_holder(c); },
        [](Ctx& c) { return criterion_residual_smoothness(c); },
        [](Ctx& c) { return criterion_tangent(c); },
        [](Ctx& c) { return criterion_theory_consistency(c); },
        [](Ctx& c) { return criterion_lemma_diagnostics(c); },
        [](Ctx& c) { return criterion_noise_envelope(c); },
        [](Ctx& c) { return criterion_determinism(c); },
    };

    std::vector<CriterionResult> results;
    for (auto& fn : criteria) {
        auto start = std::chrono::steady_clock::now();
        CriterionResult r = fn(ctx);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
        results.push_back(std::move(r));
    }

    CsvWriter csv(fs::path(cfg.out_dir) / "validate_summary.csv", ctx.prov,
                  {"criterion", "name", "pass", "seconds", "detail"});
    for (const auto& r : results)
        csv.row_mixed({std::to_string(r.id), r.name, r.pass ? "1" : "0",
                       format_double(r.seconds), "\"" + r.detail + "\""});
    csv.close();
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

}  // namespace mbm::validate
