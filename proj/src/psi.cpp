#include "mbm/psi.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "mbm/parallel.hpp"
#include "mbm/quadrature.hpp"

namespace mbm {

namespace {

constexpr double kLo = MeyerWindow::support_lo;
constexpr double kHi = MeyerWindow::support_hi;
constexpr int kStencil = 10;

void validate_config(const PsiTableConfig& cfg) {
    if (!(cfg.theta_lo > 0.0 && cfg.theta_lo < cfg.theta_hi && cfg.theta_hi < 1.0))
        throw std::invalid_argument("PsiTable: need 0 < theta_lo < theta_hi < 1");
    if (!(cfg.x_step > 0.0) || !(cfg.x_max > 0.0))
        throw std::invalid_argument("PsiTable: x_max and x_step must be positive");
    if (cfg.theta_nodes < 4 || cfg.theta_nodes > 64)
        throw std::invalid_argument("PsiTable: theta_nodes must be in [4, 64]");
    if (cfg.max_dtheta_order < 2)
        throw std::invalid_argument("PsiTable: max_dtheta_order must be >= 2");
    if (cfg.quadrature_points < 16)
        throw std::invalid_argument("PsiTable: quadrature_points must be >= 16");
}

struct CacheHeader {
    std::uint64_t magic;
    double x_max;
    double x_step;
    double theta_lo;
    double theta_hi;
    std::int64_t theta_nodes;
    std::int64_t max_dtheta_order;
    std::int64_t quadrature_points;
    std::int64_t smoothness_order;
};

constexpr std::uint64_t kMagic = 0x3130495350424d4dULL;  // "MBMPSI01"

CacheHeader make_header(const MeyerWindow& w, const PsiTableConfig& c) {
    return {kMagic, c.x_max, c.x_step, c.theta_lo, c.theta_hi,
            c.theta_nodes, c.max_dtheta_order, c.quadrature_points, w.smoothness_order()};
}

}  // namespace

PsiTable::PsiTable(const MeyerWindow& window, const PsiTableConfig& cfg, bool build)
    : window_(window), cfg_(cfg) {
    validate_config(cfg_);
    nx_ = 2 * static_cast<int>(std::round(cfg_.x_max / cfg_.x_step)) + 1;
    const int m = cfg_.theta_nodes;
    theta_nodes_.resize(m);
    bary_weights_.resize(m);
    const double mid = 0.5 * (cfg_.theta_lo + cfg_.theta_hi);
    const double half = 0.5 * (cfg_.theta_hi - cfg_.theta_lo);
    for (int i = 0; i < m; ++i) {
        double ang = (2.0 * i + 1.0) * std::numbers::pi / (2.0 * m);
        theta_nodes_[i] = mid + half * std::cos(ang);
        bary_weights_[i] = (i % 2 == 0 ? 1.0 : -1.0) * std::sin(ang);
    }
    values_.resize(static_cast<std::size_t>(cfg_.max_dtheta_order + 1) * nx_ * m);
    if (!build) return;

    // One cosine sweep per x row, reused across all (theta, n) pairs.
    const int nq = cfg_.quadrature_points;
    const auto& rule = gauss_legendre(nq);
    std::vector<double> xi(nq), base(nq);
    for (int q = 0; q < nq; ++q) {
        xi[q] = 0.5 * (kHi - kLo) * rule.nodes[q] + 0.5 * (kHi + kLo);
        base[q] = 0.5 * (kHi - kLo) * rule.weights[q] * window_.chi(xi[q]);
    }
    const int norders = cfg_.max_dtheta_order + 1;
    std::vector<double> wq(static_cast<std::size_t>(m) * norders * nq);
    for (int i = 0; i < m; ++i) {
        for (int q = 0; q < nq; ++q) {
            double pw = base[q] * std::pow(xi[q], -theta_nodes_[i] - 0.5);
            double lg = -std::log(xi[q]);
            double f = 1.0;
            for (int n = 0; n < norders; ++n) {
                wq[(static_cast<std::size_t>(i) * norders + n) * nq + q] = pw * f;
                f *= lg;
            }
        }
    }
    parallel_for(nx_, cfg_.threads, [&](std::size_t ix) {
        std::vector<double> cosv(nq);
        double x = x_at(static_cast<int>(ix));
        for (int q = 0; q < nq; ++q) cosv[q] = std::cos((x + 0.5) * xi[q]);
        for (int i = 0; i < m; ++i) {
            for (int n = 0; n < norders; ++n) {
                const double* w = &wq[(static_cast<std::size_t>(i) * norders + n) * nq];
                double acc = 0.0;
                for (int q = 0; q < nq; ++q) acc += cosv[q] * w[q];
                values_[(static_cast<std::size_t>(n) * nx_ + ix) * m + i] = 2.0 * acc;
            }
        }
    });
}

PsiTable::PsiTable(const MeyerWindow& window, const PsiTableConfig& cfg)
    : PsiTable(window, cfg, true) {}

void PsiTable::check_args(double theta, int n) const {
    if (n < 0 || n > cfg_.max_dtheta_order)
        throw std::invalid_argument("PsiTable::value: derivative order beyond max_dtheta_order");
    const double slack = 1e-12;
    if (theta < cfg_.theta_lo - slack || theta > cfg_.theta_hi + slack)
        throw std::invalid_argument("PsiTable::value: theta outside table range");
}

double PsiTable::direct(double x, double theta, int n) const {
    check_args(theta, n);
    const double ax = std::abs(x);
    if (ax > cfg_.far_cutoff) return 0.0;
    auto integrand = [&](double xi) {
        double f = window_.chi(xi) * std::pow(xi, -theta - 0.5);
        if (n > 0) f *= std::pow(-std::log(xi), n);
        return std::cos((x + 0.5) * xi) * f;
    };
    if (ax <= 40.0) {
        const auto& rule = gauss_legendre(cfg_.quadrature_points);
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            acc += rule.weights[q] * integrand(0.5 * (kHi - kLo) * rule.nodes[q] +
                                               0.5 * (kHi + kLo));
        return (kHi - kLo) * acc;
    }
    // oscillatory zone: panel count proportional to |x| (~2 phase units each),
    // fixed 32-point rule per panel
    const int panels = static_cast<int>(std::ceil((ax + 1.0) / 2.0));
    const auto& rule = gauss_legendre(32);
    const double width = (kHi - kLo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        double a = kLo + p * width;
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q)
            acc += rule.weights[q] * integrand(a + 0.5 * width * (rule.nodes[q] + 1.0));
        total += 0.5 * width * acc;
    }
    return 2.0 * total;
}

double PsiTable::interpolate(double x, double theta, int n) const {
    const int m = cfg_.theta_nodes;
    // barycentric coefficients in theta
    double alpha[64];
    int exact_node = -1;
    for (int i = 0; i < m; ++i) {
        if (std::abs(theta - theta_nodes_[i]) < 1e-14) {
            exact_node = i;
            break;
        }
    }
    if (exact_node < 0) {
        double denom = 0.0;
        for (int i = 0; i < m; ++i) {
            alpha[i] = bary_weights_[i] / (theta - theta_nodes_[i]);
            denom += alpha[i];
        }
        for (int i = 0; i < m; ++i) alpha[i] /= denom;
    }

    double s = (x + cfg_.x_max) / cfg_.x_step;
    int lo = static_cast<int>(std::floor(s)) - (kStencil / 2 - 1);
    lo = std::clamp(lo, 0, nx_ - kStencil);

    double rows[kStencil];
    for (int r = 0; r < kStencil; ++r) {
        const double* v = &values_[(static_cast<std::size_t>(n) * nx_ + lo + r) * m];
        if (exact_node >= 0) {
            rows[r] = v[exact_node];
        } else {
            double acc = 0.0;
            for (int i = 0; i < m; ++i) acc += alpha[i] * v[i];
            rows[r] = acc;
        }
    }
    // Lagrange in x on the integer stencil: nodes at s0 = lo..lo+9
    double u = s - lo;
    double result = 0.0;
    for (int r = 0; r < kStencil; ++r) {
        double basis = 1.0;
        for (int q = 0; q < kStencil; ++q) {
            if (q == r) continue;
            basis *= (u - q) / double(r - q);
        }
        result += basis * rows[r];
    }
    return result;
}

double PsiTable::value(double x, double theta, int n) const {
    check_args(theta, n);
    if (std::abs(x) <= cfg_.x_max) return interpolate(x, theta, n);
    return direct(x, theta, n);
}

double PsiTable::localization_constant(int ell, int n) const {
    if (ell < 2) throw std::invalid_argument("localization_constant: ell must be >= 2");
    if (n < 0 || n > cfg_.max_dtheta_order)
        throw std::invalid_argument("localization_constant: n beyond max_dtheta_order");
    const int m = cfg_.theta_nodes;
    double sup = 0.0;
    for (int ix = 0; ix < nx_; ++ix) {
        double w = std::pow(2.0 + std::abs(x_at(ix)), ell);
        const double* v = &values_[(static_cast<std::size_t>(n) * nx_ + ix) * m];
        for (int i = 0; i < m; ++i) sup = std::max(sup, w * std::abs(v[i]));
    }
    return sup;
}

bool PsiTable::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) return false;
    CacheHeader h = make_header(window_, cfg_);
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
    return static_cast<bool>(out);
}

std::optional<PsiTable> PsiTable::load(const std::filesystem::path& file,
                                       const MeyerWindow& window, const PsiTableConfig& cfg) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    CacheHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in) return std::nullopt;
    CacheHeader want = make_header(window, cfg);
    if (std::memcmp(&h, &want, sizeof(h)) != 0) return std::nullopt;
    PsiTable table(window, cfg, false);
    in.read(reinterpret_cast<char*>(table.values_.data()),
            static_cast<std::streamsize>(table.values_.size() * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(table.values_.size() * sizeof(double)))
        return std::nullopt;
    return table;
}

}  // namespace mbm
