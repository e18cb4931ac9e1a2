#include "mbm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mbm {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a real, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v +
                                    "'");
    }
}

std::vector<double> split_reals(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

std::vector<double> parse_lags(const std::string& text) {
    std::string s = trim(text);
    auto dots = s.find("..");
    if (dots != std::string::npos) {
        auto parse_pow = [&](const std::string& part) {
            std::string p = trim(part);
            if (p.rfind("2^", 0) != 0)
                throw std::invalid_argument("lags: expected 2^E..2^E form, got '" + text + "'");
            return to_int("lags", p.substr(2));
        };
        long long e0 = parse_pow(s.substr(0, dots));
        long long e1 = parse_pow(s.substr(dots + 2));
        if (e0 > e1) std::swap(e0, e1);
        std::vector<double> lags;
        for (long long e = e0; e <= e1; ++e) lags.push_back(std::ldexp(1.0, int(e)));
        return lags;
    }
    auto lags = split_reals("lags", s);
    if (lags.empty()) throw std::invalid_argument("lags: empty list");
    std::sort(lags.begin(), lags.end());
    return lags;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.lags = parse_lags("2^-9..2^-4");
    cfg.tangent_rhos = parse_lags("2^-8..2^-4");
    std::reverse(cfg.tangent_rhos.begin(), cfg.tangent_rhos.end());  // decreasing

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        cfg.echo.emplace_back(key, val);

        if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, val));
        else if (key == "threads") cfg.threads = int(to_int(key, val));
        else if (key == "a") cfg.a = to_double(key, val);
        else if (key == "b") cfg.b = to_double(key, val);
        else if (key == "beta") cfg.beta = to_double(key, val);
        else if (key == "ell") cfg.ell = int(to_int(key, val));
        else if (key == "epsilon_slack") cfg.epsilon_slack = to_double(key, val);
        else if (key == "grid_resolution") cfg.grid_resolution = int(to_int(key, val));
        else if (key == "j_min") cfg.j_min = int(to_int(key, val));
        else if (key == "j_max") cfg.j_max = int(to_int(key, val));
        else if (key == "k_window") cfg.k_window = int(to_int(key, val));
        else if (key == "t_start") cfg.t_start = to_double(key, val);
        else if (key == "t_end") cfg.t_end = to_double(key, val);
        else if (key == "t_points") cfg.t_points = int(to_int(key, val));
        else if (key == "replicates") cfg.replicates = int(to_int(key, val));
        else if (key == "components") cfg.components = to_int(key, val) != 0;
        else if (key == "lags") cfg.lags = parse_lags(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else if (key == "hurst.kind") cfg.hurst.kind = val;
        else if (key == "hurst.value") cfg.hurst.value = to_double(key, val);
        else if (key == "hurst.mean") cfg.hurst.mean = to_double(key, val);
        else if (key == "hurst.amp") cfg.hurst.amp = to_double(key, val);
        else if (key == "hurst.freq") cfg.hurst.freq = to_double(key, val);
        else if (key == "hurst.phase") cfg.hurst.phase = to_double(key, val);
        else if (key == "hurst.lo") cfg.hurst.lo = to_double(key, val);
        else if (key == "hurst.hi") cfg.hurst.hi = to_double(key, val);
        else if (key == "hurst.center") cfg.hurst.center = to_double(key, val);
        else if (key == "hurst.rate") cfg.hurst.rate = to_double(key, val);
        else if (key == "hurst.nodes") cfg.hurst.nodes = val;
        else if (key == "hurst.breaks") cfg.hurst.breaks = val;
        else if (key == "hurst.values") cfg.hurst.values = val;
        else if (key == "hurst.t0") cfg.hurst.t0 = to_double(key, val);
        else if (key == "hurst.t1") cfg.hurst.t1 = to_double(key, val);
        else if (key == "psi.x_max") cfg.psi.x_max = to_double(key, val);
        else if (key == "psi.x_step") cfg.psi.x_step = to_double(key, val);
        else if (key == "psi.theta_nodes") cfg.psi.theta_nodes = int(to_int(key, val));
        else if (key == "psi.quadrature_points") cfg.psi.quadrature_points = int(to_int(key, val));
        else if (key == "psi.n_max") cfg.psi.n_max = int(to_int(key, val));
        else if (key == "psi.theta_lo") cfg.psi.theta_lo = to_double(key, val);
        else if (key == "psi.theta_hi") cfg.psi.theta_hi = to_double(key, val);
        else if (key == "holder.points") cfg.holder_points = split_reals(key, val);
        else if (key == "tangent.t") cfg.tangent_t = to_double(key, val);
        else if (key == "tangent.rhos") {
            cfg.tangent_rhos = parse_lags(val);
            std::sort(cfg.tangent_rhos.rbegin(), cfg.tangent_rhos.rend());
        } else if (key == "tangent.u") cfg.tangent_u = split_reals(key, val);
        else if (key == "diag.t") cfg.diag_t = to_double(key, val);
        else if (key == "diag.theta") cfg.diag_theta = to_double(key, val);
        else if (key == "diag.n") cfg.diag_n = int(to_int(key, val));
        else if (key == "diag.j_max") cfg.diag_j_max = int(to_int(key, val));
        else if (key == "region.resolution") cfg.region_resolution = int(to_int(key, val));
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }

    // cross-field invariants
    if (cfg.a > cfg.b) throw std::invalid_argument("a must be <= b");
    if (!(cfg.a > 0.0 && cfg.b < 1.0))
        throw std::invalid_argument("config: need 0 < a <= b < 1");
    if (!(cfg.j_min < 0 && cfg.j_max >= 0))
        throw std::invalid_argument("config: need j_min < 0 <= j_max");
    if (cfg.replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (cfg.t_points < 1) throw std::invalid_argument("config: t_points must be >= 1");
    if (!(cfg.t_end > cfg.t_start))
        throw std::invalid_argument("config: need t_end > t_start");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

HurstFunction make_hurst(const ExperimentConfig& cfg) {
    const auto& h = cfg.hurst;
    if (h.kind == "constant") return HurstFunction::constant(h.value);
    if (h.kind == "sine") return HurstFunction::sine(h.mean, h.amp, h.freq, h.phase);
    if (h.kind == "logistic") return HurstFunction::logistic(h.lo, h.hi, h.center, h.rate);
    if (h.kind == "piecewise" || h.kind == "piecewise-linear") {
        std::vector<std::pair<double, double>> nodes;
        std::stringstream ss(h.nodes);
        std::string item;
        while (std::getline(ss, item, ',')) {
            auto colon = item.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("hurst.nodes: expected 't:h' pairs");
            nodes.emplace_back(to_double("hurst.nodes", item.substr(0, colon)),
                               to_double("hurst.nodes", item.substr(colon + 1)));
        }
        return HurstFunction::piecewise(std::move(nodes));
    }
    if (h.kind == "step")
        return HurstFunction::step(split_reals("hurst.breaks", h.breaks),
                                   split_reals("hurst.values", h.values));
    if (h.kind == "table")
        return HurstFunction::table(h.t0, h.t1, split_reals("hurst.values", h.values));
    throw std::invalid_argument("config: unknown hurst.kind '" + h.kind + "'");
}

}  // namespace mbm
