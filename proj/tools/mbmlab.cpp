#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "mbm/analysis.hpp"
#include "mbm/config.hpp"
#include "mbm/csv.hpp"
#include "mbm/meyer.hpp"
#include "mbm/noise.hpp"
#include "mbm/psi.hpp"
#include "mbm/synthesis.hpp"
#include "mbm/theory.hpp"
#include "mbm/validate.hpp"

namespace fs = std::filesystem;
using namespace mbm;

namespace {

PsiTableConfig table_config(const ExperimentConfig& cfg, const HurstFunction* h) {
    PsiTableConfig tc;
    tc.x_max = cfg.psi.x_max;
    tc.x_step = cfg.psi.x_step;
    tc.theta_nodes = cfg.psi.theta_nodes;
    tc.max_dtheta_order = cfg.psi.n_max;
    tc.quadrature_points = cfg.psi.quadrature_points;
    tc.threads = cfg.threads;
    if (cfg.psi.theta_lo > 0.0 && cfg.psi.theta_hi > 0.0) {
        tc.theta_lo = cfg.psi.theta_lo;
        tc.theta_hi = cfg.psi.theta_hi;
    } else {
        double lo = h ? h->range_lo() : cfg.a;
        double hi = h ? h->range_hi() : cfg.b;
        tc.theta_lo = std::max(0.01, lo - 0.05);
        tc.theta_hi = std::min(0.99, hi + 0.05);
        if (tc.theta_hi - tc.theta_lo < 0.1) {
            double mid = 0.5 * (tc.theta_lo + tc.theta_hi);
            tc.theta_lo = std::max(0.01, mid - 0.05);
            tc.theta_hi = std::min(0.99, mid + 0.05);
        }
    }
    return tc;
}

// Builds the table, reusing an on-disk cache in out_dir when the header matches.
PsiTable cached_table(const ExperimentConfig& cfg, const HurstFunction* h) {
    MeyerWindow window(3);
    PsiTableConfig tc = table_config(cfg, h);
    std::ostringstream name;
    name << "psi_cache_x" << tc.x_max << "_t" << tc.theta_lo << "_" << tc.theta_hi << "_n"
         << tc.theta_nodes << "_d" << tc.max_dtheta_order << "_q" << tc.quadrature_points
         << ".bin";
    fs::path file = fs::path(cfg.out_dir) / name.str();
    if (auto cached = PsiTable::load(file, window, tc)) return std::move(*cached);
    PsiTable table(window, tc);
    fs::create_directories(cfg.out_dir);
    table.save(file);
    return table;
}

std::vector<double> uniform_grid(const ExperimentConfig& cfg) {
    std::vector<double> grid(cfg.t_points);
    for (int i = 0; i < cfg.t_points; ++i)
        grid[i] = cfg.t_start +
                  (cfg.t_end - cfg.t_start) * double(i) / double(std::max(1, cfg.t_points - 1));
    return grid;
}

SynthesisConfig synth_config(const ExperimentConfig& cfg, std::vector<double> grid) {
    SynthesisConfig scfg;
    scfg.j_min = cfg.j_min;
    scfg.j_max = cfg.j_max;
    scfg.k_window = cfg.k_window;
    scfg.t_grid = std::move(grid);
    scfg.replicates = cfg.replicates;
    scfg.threads = cfg.threads;
    scfg.components = cfg.components;
    return scfg;
}

void write_paths_csv(const ExperimentConfig& cfg, const PathBundle& bundle,
                     const std::string& subcommand) {
    std::vector<std::string> cols{"replicate", "t", "X", "Z", "R"};
    bool split = !bundle.x_low.empty();
    if (split) {
        cols.insert(cols.end(), {"X_low", "X_high", "Z_low", "Z_high"});
    }
    CsvWriter csv(fs::path(cfg.out_dir) / "paths.csv",
                  provenance_lines(subcommand, cfg.seed, cfg.echo), cols);
    for (std::size_t r = 0; r < bundle.x.reps; ++r) {
        for (std::size_t i = 0; i < bundle.t_grid.size(); ++i) {
            std::vector<double> row{double(r), bundle.t_grid[i], bundle.x.at(r, i),
                                    bundle.z.at(r, i), bundle.r.at(r, i)};
            if (split) {
                row.push_back(bundle.x_low.at(r, i));
                row.push_back(bundle.x_high.at(r, i));
                row.push_back(bundle.z_low.at(r, i));
                row.push_back(bundle.z_high.at(r, i));
            }
            csv.row(row);
        }
    }
    csv.close();
}

void write_plot_script(const ExperimentConfig& cfg, const std::string& csvname,
                       const std::string& gpname, const std::string& what) {
    std::ofstream gp(fs::path(cfg.out_dir) / gpname);
    gp << "# gnuplot script (datafile separator comma, '#' comments skipped)\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key outside\n";
    if (what == "paths")
        gp << "plot '" << csvname << "' using 2:($1==0?$3:1/0) with lines title 'X rep0', \\\n"
           << "     '" << csvname << "' using 2:($1==0?$4:1/0) with lines title 'Z rep0', \\\n"
           << "     '" << csvname << "' using 2:($1==0?$5:1/0) with lines title 'R rep0'\n";
    else if (what == "region")
        gp << "set view map\nsplot '" << csvname << "' using 1:2:3 with points pt 5 palette\n";
}

int cmd_psi_table(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    CsvWriter csv(fs::path(cfg.out_dir) / "psi_summary.csv",
                  provenance_lines("psi-table", cfg.seed, cfg.echo),
                  {"x_max", "x_step", "theta_lo", "theta_hi", "theta_nodes", "n_max",
                   "quadrature_points", "c2_ell2_n0", "c2_ell4_n0", "c2_ell4_n1", "c2_ell4_n2"});
    const auto& tc = table.config();
    csv.row({tc.x_max, tc.x_step, tc.theta_lo, tc.theta_hi, double(tc.theta_nodes),
             double(tc.max_dtheta_order), double(tc.quadrature_points),
             table.localization_constant(2, 0), table.localization_constant(4, 0),
             table.localization_constant(4, 1), table.localization_constant(4, 2)});
    csv.close();
    std::cout << "psi table ready; localization c2(l=4,n=0) = "
              << table.localization_constant(4, 0) << "\n";
    return 0;
}

int cmd_synthesize(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    PathBundle bundle =
        synthesize_residual(h, synth_config(cfg, uniform_grid(cfg)), NoiseLattice(cfg.seed),
                            table);
    write_paths_csv(cfg, bundle, "synthesize");
    write_plot_script(cfg, "paths.csv", "plot_paths.gp", "paths");
    std::cout << "wrote " << (fs::path(cfg.out_dir) / "paths.csv").string() << " ("
              << bundle.x.reps << " replicates x " << bundle.t_grid.size() << " points)\n";
    return 0;
}

int cmd_residual(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    PathBundle bundle =
        synthesize_residual(h, synth_config(cfg, uniform_grid(cfg)), NoiseLattice(cfg.seed),
                            table);
    write_paths_csv(cfg, bundle, "residual");

    double max_r = 0.0;
    for (double v : bundle.r.data) max_r = std::max(max_r, std::abs(v));
    std::vector<int> steps{1, 2, 4, 8, 16, 32};
    std::size_t hi = bundle.t_grid.size() - 1;
    auto sr = analysis::smoothness_exponent(bundle.r, bundle.t_grid, 0, hi, steps);
    auto sx = analysis::smoothness_exponent(bundle.x, bundle.t_grid, 0, hi, steps);
    auto sz = analysis::smoothness_exponent(bundle.z, bundle.t_grid, 0, hi, steps);
    CsvWriter csv(fs::path(cfg.out_dir) / "residual_summary.csv",
                  provenance_lines("residual", cfg.seed, cfg.echo),
                  {"max_abs_r", "exponent_r", "exponent_x", "exponent_z", "zero_variance_r",
                   "within_theorem"});
    csv.row({max_r, sr.exponent, sx.exponent, sz.exponent, sr.zero_variance ? 1.0 : 0.0,
             h.within_theorem() && theory::condition_19(h.range_lo(), h.range_hi()) ? 1.0 : 0.0});
    csv.close();
    if (!h.within_theorem() ||
        !theory::condition_19(h.range_lo(), h.range_hi()))
        std::cout << "note: this H(.) lies outside Theorem hypotheses "
                     "(condition (19) or beta > b fails); results are exploratory\n";
    std::cout << "residual smoothness " << sr.exponent << " vs X " << sx.exponent << "\n";
    return 0;
}

int cmd_estimate_holder(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    CsvWriter csv(fs::path(cfg.out_dir) / "holder.csv",
                  provenance_lines("estimate-holder", cfg.seed, cfg.echo),
                  {"t", "target_H", "estimate_x", "estimate_z"});
    for (double t : cfg.holder_points) {
        SynthesisConfig scfg = synth_config(cfg, {});
        scfg.t_grid.push_back(t);
        for (double lag : cfg.lags) {
            scfg.t_grid.push_back(t - lag);
            scfg.t_grid.push_back(t + lag);
        }
        std::sort(scfg.t_grid.begin(), scfg.t_grid.end());
        PathBundle bundle = synthesize_residual(h, scfg, NoiseLattice(cfg.seed), table);
        auto vx = analysis::estimate_pointwise_holder(bundle.x, scfg.t_grid, t, cfg.lags);
        auto vz = analysis::estimate_pointwise_holder(bundle.z, scfg.t_grid, t, cfg.lags);
        csv.row({t, h(t), vx.exponent, vz.exponent});
        std::cout << "t=" << t << " H=" << h(t) << " est X=" << vx.exponent
                  << " Z=" << vz.exponent << "\n";
    }
    csv.close();
    return 0;
}

int cmd_tangent(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    SynthesisConfig scfg = synth_config(cfg, {1.0});  // grid replaced per rho
    CsvWriter csv(fs::path(cfg.out_dir) / "tangent.csv",
                  provenance_lines("tangent", cfg.seed, cfg.echo),
                  {"process", "rho", "frobenius_rel_error"});
    for (auto proc : {analysis::Process::mbm, analysis::Process::z}) {
        auto rep = analysis::tangent_convergence(h, cfg.tangent_t, cfg.tangent_rhos,
                                                 cfg.tangent_u, proc, scfg,
                                                 NoiseLattice(cfg.seed), table);
        for (std::size_t i = 0; i < rep.rhos.size(); ++i)
            csv.row_mixed({proc == analysis::Process::mbm ? "X" : "Z",
                           format_double(rep.rhos[i]), format_double(rep.frob_rel_error[i])});
    }
    csv.close();
    std::cout << "wrote tangent.csv\n";
    return 0;
}

int cmd_diagnostics(const ExperimentConfig& cfg) {
    HurstFunction h = make_hurst(cfg);
    PsiTable table = cached_table(cfg, &h);
    CsvWriter acsv(fs::path(cfg.out_dir) / "diagnostics_a.csv",
                   provenance_lines("diagnostics", cfg.seed, cfg.echo), {"j_max", "value"});
    for (int jm = 0; jm <= cfg.diag_j_max; jm += (jm < 8 ? 1 : 4))
        acsv.row({double(jm), analysis::truncated_A_n(cfg.diag_t, cfg.diag_theta, cfg.diag_n, jm,
                                                      cfg.k_window, table)});
    acsv.close();
    CsvWriter gcsv(fs::path(cfg.out_dir) / "diagnostics_g.csv",
                   provenance_lines("diagnostics", cfg.seed, cfg.echo), {"h", "value"});
    for (int e = -8; e <= -4; ++e) {
        double hh = std::ldexp(1.0, e);
        gcsv.row({hh, analysis::truncated_G_n(cfg.diag_t, cfg.diag_t + hh, cfg.diag_theta,
                                              std::max(1, cfg.diag_n), h, std::min(cfg.j_max, 16),
                                              cfg.k_window, table)});
    }
    gcsv.close();
    std::cout << "wrote diagnostics_a.csv, diagnostics_g.csv\n";
    return 0;
}

int cmd_region(const ExperimentConfig& cfg) {
    auto raster = theory::region_raster(cfg.region_resolution);
    CsvWriter csv(fs::path(cfg.out_dir) / "region.csv",
                  provenance_lines("region", cfg.seed, cfg.echo), {"a", "b", "feasible"});
    for (const auto& cell : raster) csv.row({cell.a, cell.b, cell.feasible ? 1.0 : 0.0});
    csv.close();
    write_plot_script(cfg, "region.csv", "plot_region.gp", "region");
    std::cout << "wrote region.csv (" << raster.size() << " cells)\n";
    return 0;
}

int cmd_exponent(const ExperimentConfig& cfg) {
    auto eb = theory::exponent_bound(cfg.a, cfg.b, cfg.beta, cfg.ell, cfg.epsilon_slack,
                                     cfg.grid_resolution);
    CsvWriter csv(fs::path(cfg.out_dir) / "exponent.csv",
                  provenance_lines("exponent", cfg.seed, cfg.echo),
                  {"a", "b", "beta", "ell", "epsilon_slack", "feasible", "d", "eta_star",
                   "gamma_star", "constraint_1", "constraint_2", "constraint_3"});
    csv.row({eb.a, eb.b, eb.beta, double(eb.ell), eb.epsilon_slack, eb.feasible ? 1.0 : 0.0,
             eb.d, eb.eta_star, eb.gamma_star, eb.constraint_values[0], eb.constraint_values[1],
             eb.constraint_values[2]});
    csv.close();
    std::cout << "condition_19(" << cfg.a << "," << cfg.b
              << ") = " << (theory::condition_19(cfg.a, cfg.b) ? "true" : "false")
              << ", d = " << eb.d << (eb.feasible ? " (feasible)" : " (not feasible)") << "\n";
    return 0;
}

int cmd_validate(const ExperimentConfig& cfg) {
    auto results = validate::run_all(cfg);
    for (const auto& r : results)
        std::printf("[%s] criterion %2d %-34s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
    bool ok = validate::all_passed(results);
    std::printf("%s\n", ok ? "all criteria passed" : "some criteria failed");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mbmlab: wavelet-series synthesis of mBm, its dyadic variant Z, and the "
                 "residual R = Z - X, with the accompanying regularity checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::int64_t seed_override = -1;
    std::string out_override;

    const std::vector<std::string> names = {"psi-table", "synthesize", "residual",
                                            "estimate-holder", "tangent", "diagnostics",
                                            "region", "exponent", "validate"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--seed", seed_override, "override the config seed");
        sub->add_option("--out", out_override, "override the output directory");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg =
            config_path.empty() ? parse_config("") : load_config_file(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (!out_override.empty()) cfg.out_dir = out_override;
        fs::create_directories(cfg.out_dir);

        std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "psi-table") return cmd_psi_table(cfg);
        if (sub == "synthesize") return cmd_synthesize(cfg);
        if (sub == "residual") return cmd_residual(cfg);
        if (sub == "estimate-holder") return cmd_estimate_holder(cfg);
        if (sub == "tangent") return cmd_tangent(cfg);
        if (sub == "diagnostics") return cmd_diagnostics(cfg);
        if (sub == "region") return cmd_region(cfg);
        if (sub == "exponent") return cmd_exponent(cfg);
        if (sub == "validate") return cmd_validate(cfg);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
