#include "mbm/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "mbm/quadrature.hpp"

namespace mbm::analysis {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double c_theta_quadrature(double theta) {
    // 4 int_0^inf (1 - cos xi) xi^{-1-2 theta} d xi, split at 1 and A.
    const double A = 128.0;
    const double s = 1.0 + 2.0 * theta;
    // (0,1]: expand 1-cos = sum (-1)^{m+1} xi^{2m}/(2m)!
    double head = 0.0;
    for (int m = 1; m <= 24; ++m) {
        double term = 1.0 / (factorial(2 * m) * (2.0 * m - 2.0 * theta));
        head += (m % 2 == 1) ? term : -term;
    }
    // [1, A]: smooth, ~20 oscillations
    const auto& rule = gauss_legendre(1024);
    double mid = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double xi = 0.5 * (A - 1.0) * rule.nodes[q] + 0.5 * (A + 1.0);
        mid += 0.5 * (A - 1.0) * rule.weights[q] * (1.0 - std::cos(xi)) * std::pow(xi, -s);
    }
    // [A, inf): int xi^{-s} = A^{1-s}/(s-1); cos part by asymptotic IBP
    double tail_pow = std::pow(A, 1.0 - s) / (s - 1.0);
    double sinA = std::sin(A), cosA = std::cos(A);
    double p1 = s, p2 = s * (s + 1), p3 = p2 * (s + 2), p4 = p3 * (s + 3), p5 = p4 * (s + 4);
    double icos = -sinA * std::pow(A, -s) + p1 * cosA * std::pow(A, -s - 1) +
                  p2 * sinA * std::pow(A, -s - 2) - p3 * cosA * std::pow(A, -s - 3) -
                  p4 * sinA * std::pow(A, -s - 4) + p5 * cosA * std::pow(A, -s - 5);
    return 4.0 * (head + mid + tail_pow - icos);
}

std::once_flag fftw_guard;

// Complex backward DFT (unnormalized), deterministic FFTW_ESTIMATE plans.
void backward_fft(std::vector<std::complex<double>>& buf) {
    std::call_once(fftw_guard, [] {});
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    fftw_complex* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(buf.size()), data, data, FFTW_BACKWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

double fbm_scale_constant(double theta) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("fbm_scale_constant: theta must lie in (0,1)");
    static std::mutex mu;
    static std::map<double, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(theta);
    if (it == cache.end()) it = cache.emplace(theta, c_theta_quadrature(theta)).first;
    return it->second;
}

double fbm_covariance(double s, double t, double theta) {
    double c = fbm_scale_constant(theta);
    double h2 = 2.0 * theta;
    return 0.5 * c * (std::pow(std::abs(s), h2) + std::pow(std::abs(t), h2) -
                      std::pow(std::abs(s - t), h2));
}

PathBundle oracle_fbm(double theta, double t0, double dt, int n_points, int replicates,
                      std::uint64_t seed) {
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("oracle_fbm: theta must lie in (0,1)");
    if (n_points < 2 || replicates < 1 || !(dt > 0.0))
        throw std::invalid_argument("oracle_fbm: bad grid");
    const int n_incr = n_points - 1;
    const int m = next_pow2(2 * n_incr);
    const double c = fbm_scale_constant(theta);
    const double h2 = 2.0 * theta;

    // stationary increment covariance gamma(k), circulant embedding of size m
    auto gamma = [&](int k) {
        double kk = std::abs(double(k));
        return 0.5 * c * std::pow(dt, h2) *
               (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) +
                std::pow(std::abs(kk - 1.0), h2));
    };
    std::vector<std::complex<double>> circ(m);
    for (int i = 0; i <= m / 2; ++i) circ[i] = gamma(i);
    for (int i = m / 2 + 1; i < m; ++i) circ[i] = gamma(m - i);
    backward_fft(circ);  // eigenvalues (real since circ row is symmetric)
    std::vector<double> lambda(m);
    double lmax = 0.0, lmin = 0.0;
    for (int i = 0; i < m; ++i) {
        lambda[i] = circ[i].real();
        lmax = std::max(lmax, lambda[i]);
        lmin = std::min(lmin, lambda[i]);
    }
    if (lmin < -1e-9 * lmax)
        throw std::runtime_error(
            "oracle_fbm: circulant embedding not nonnegative-definite; "
            "increase the embedding size");
    for (auto& l : lambda) l = std::max(l, 0.0);

    PathBundle bundle;
    bundle.t_grid.resize(n_points);
    for (int i = 0; i < n_points; ++i) bundle.t_grid[i] = t0 + dt * i;
    bundle.seed = seed;
    bundle.b = PathMatrix(replicates, n_points);

    NoiseLattice lat(seed);
    const double scale = 1.0 / std::sqrt(double(m));
    std::vector<std::complex<double>> buf(m);
    for (int pair = 0; 2 * pair < replicates; ++pair) {
        for (int k = 0; k < m; ++k) {
            std::uint64_t base = (static_cast<std::uint64_t>(pair) * m + k) * 2;
            double re = lat.oracle_normal(base);
            double im = lat.oracle_normal(base + 1);
            double w = std::sqrt(lambda[k]) * scale;
            buf[k] = {w * re, w * im};
        }
        backward_fft(buf);
        for (int half = 0; half < 2; ++half) {
            int rep = 2 * pair + half;
            if (rep >= replicates) break;
            double acc = 0.0;
            bundle.b.at(rep, 0) = 0.0;
            for (int i = 0; i < n_incr; ++i) {
                acc += (half == 0) ? buf[i].real() : buf[i].imag();
                bundle.b.at(rep, i + 1) = acc;
            }
        }
    }
    return bundle;
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

namespace {

std::size_t grid_index(const std::vector<double>& grid, double t) {
    auto it = std::lower_bound(grid.begin(), grid.end(), t - 1e-11);
    if (it == grid.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("grid point not present in t_grid");
    return static_cast<std::size_t>(it - grid.begin());
}

}  // namespace

VariogramReport estimate_pointwise_holder(const PathMatrix& paths,
                                          const std::vector<double>& t_grid, double t,
                                          const std::vector<double>& lags) {
    if (lags.size() < 3)
        throw std::invalid_argument("estimate_pointwise_holder: need >= 3 lags");
    VariogramReport rep;
    rep.anchor = t;
    std::size_t i0 = grid_index(t_grid, t);
    std::vector<double> lx, ly;
    for (double h : lags) {
        std::size_t ip = grid_index(t_grid, t + h);
        std::size_t im = grid_index(t_grid, t - h);
        double acc = 0.0;
        for (std::size_t r = 0; r < paths.reps; ++r) {
            double dp = paths.at(r, ip) - paths.at(r, i0);
            double dm = paths.at(r, im) - paths.at(r, i0);
            acc += 0.5 * (dp * dp + dm * dm);
        }
        double msq = acc / double(paths.reps);
        rep.lags.push_back(h);
        rep.msq_increment.push_back(msq);
        if (msq > 0.0) {
            lx.push_back(std::log(h));
            ly.push_back(std::log(msq));
        }
    }
    if (lx.size() < 3) {
        rep.zero_variance = true;
        rep.exponent = 1.0;
        return rep;
    }
    auto [slope, icpt] = linear_fit(lx, ly);
    rep.slope = slope;
    rep.intercept = icpt;
    rep.exponent = std::min(slope / 2.0, 1.0);
    return rep;
}

SmoothnessReport smoothness_exponent(const PathMatrix& paths, const std::vector<double>& t_grid,
                                     std::size_t i_lo, std::size_t i_hi,
                                     const std::vector<int>& lag_steps) {
    if (i_hi <= i_lo || i_hi >= t_grid.size())
        throw std::invalid_argument("smoothness_exponent: bad window");
    if (paths.reps < 1) throw std::invalid_argument("smoothness_exponent: empty paths");
    const double dt = t_grid[i_lo + 1] - t_grid[i_lo];
    for (std::size_t i = i_lo + 1; i < i_hi; ++i)
        if (std::abs((t_grid[i + 1] - t_grid[i]) - dt) > 1e-9 * dt)
            throw std::invalid_argument("smoothness_exponent: window grid must be uniform");

    SmoothnessReport rep;
    std::vector<double> lx, ly;
    for (int m : lag_steps) {
        if (m < 1 || i_lo + m > i_hi)
            throw std::invalid_argument("smoothness_exponent: lag exceeds window");
        double acc = 0.0;
        for (std::size_t r = 0; r < paths.reps; ++r) {
            double sup = 0.0;
            for (std::size_t i = i_lo; i + 1 <= i_hi; ++i) {
                std::size_t jmax = std::min(i + m, i_hi);
                for (std::size_t j = i + 1; j <= jmax; ++j)
                    sup = std::max(sup, std::abs(paths.at(r, j) - paths.at(r, i)));
            }
            acc += sup;
        }
        double mean_sup = acc / double(paths.reps);
        rep.lags.push_back(m * dt);
        rep.mean_sup.push_back(mean_sup);
        if (mean_sup > 0.0) {
            lx.push_back(std::log(m * dt));
            ly.push_back(std::log(mean_sup));
        }
    }
    if (lx.size() < 2) {
        rep.zero_variance = true;
        rep.exponent = 1.0;
        return rep;
    }
    rep.slope = linear_fit(lx, ly).first;
    rep.exponent = std::min(rep.slope, 1.0);
    return rep;
}

TangentReport tangent_convergence(const HurstFunction& H, double t,
                                  const std::vector<double>& rho_list,
                                  const std::vector<double>& u_grid, Process proc,
                                  const SynthesisConfig& base_cfg, const NoiseLattice& lattice,
                                  const PsiTable& table) {
    TangentReport rep;
    const double ht = H(t);
    const std::size_t nu = u_grid.size();
    std::vector<double> ref(nu * nu);
    double ref_norm = 0.0;
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nu; ++j) {
            ref[i * nu + j] = fbm_covariance(u_grid[i], u_grid[j], ht);
            ref_norm += ref[i * nu + j] * ref[i * nu + j];
        }
    ref_norm = std::sqrt(ref_norm);

    for (double rho : rho_list) {
        SynthesisConfig cfg = base_cfg;
        std::vector<double> pts{t};
        for (double u : u_grid) pts.push_back(t + rho * u);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        cfg.t_grid = pts;
        PathBundle bundle = (proc == Process::mbm) ? synthesize_mbm(H, cfg, lattice, table)
                                                   : synthesize_z(H, cfg, lattice, table);
        const PathMatrix& paths = (proc == Process::mbm) ? bundle.x : bundle.z;
        std::size_t it = grid_index(cfg.t_grid, t);
        std::vector<std::size_t> iu(nu);
        for (std::size_t i = 0; i < nu; ++i) iu[i] = grid_index(cfg.t_grid, t + rho * u_grid[i]);

        const double scale = std::pow(rho, -ht);
        std::vector<double> emp(nu * nu, 0.0);
        for (std::size_t r = 0; r < paths.reps; ++r) {
            for (std::size_t i = 0; i < nu; ++i) {
                double di = (paths.at(r, iu[i]) - paths.at(r, it)) * scale;
                for (std::size_t j = i; j < nu; ++j) {
                    double dj = (paths.at(r, iu[j]) - paths.at(r, it)) * scale;
                    emp[i * nu + j] += di * dj;
                }
            }
        }
        double err = 0.0;
        for (std::size_t i = 0; i < nu; ++i)
            for (std::size_t j = 0; j < nu; ++j) {
                double e = ((j >= i) ? emp[i * nu + j] : emp[j * nu + i]) / double(paths.reps);
                double d = e - ref[i * nu + j];
                err += d * d;
            }
        rep.rhos.push_back(rho);
        rep.frob_rel_error.push_back(std::sqrt(err) / ref_norm);
    }
    return rep;
}

namespace {

// union of the window around 2^j t (optionally two windows) and the anchor set
std::vector<std::pair<std::int64_t, std::int64_t>> union_intervals(
    std::vector<std::pair<std::int64_t, std::int64_t>> raw) {
    std::sort(raw.begin(), raw.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> merged;
    for (const auto& iv : raw) {
        if (!merged.empty() && iv.first <= merged.back().second + 1)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    return merged;
}

}  // namespace

double truncated_A_n(double t, double theta, int n, int j_max, int k_window,
                     const PsiTable& table) {
    if (j_max < 0 || k_window < 1) throw std::invalid_argument("truncated_A_n: bad truncation");
    double total = 0.0;
    for (int j = 0; j <= j_max; ++j) {
        std::int64_t kc = static_cast<std::int64_t>(std::floor(std::ldexp(t, j)));
        auto intervals = union_intervals({{-std::int64_t(k_window), std::int64_t(k_window)},
                                          {kc - k_window, kc + k_window}});
        for (const auto& [klo, khi] : intervals)
            for (std::int64_t k = klo; k <= khi; ++k)
                total += std::abs(g_jk(t, theta, j, k, n, table)) *
                         std::sqrt(std::log(3.0 + j + std::abs(double(k))));
    }
    return total;
}

double truncated_G_n(double t0, double t1, double theta, int n, const HurstFunction& H,
                     int j_max, int k_window, const PsiTable& table) {
    if (n < 1) throw std::invalid_argument("truncated_G_n: n must be >= 1");
    if (j_max < 0 || k_window < 1) throw std::invalid_argument("truncated_G_n: bad truncation");
    const double ht0 = H(t0);
    double total = 0.0;
    for (int j = 0; j <= j_max; ++j) {
        std::int64_t kc0 = static_cast<std::int64_t>(std::floor(std::ldexp(t0, j)));
        std::int64_t kc1 = static_cast<std::int64_t>(std::floor(std::ldexp(t1, j)));
        auto intervals = union_intervals({{-std::int64_t(k_window), std::int64_t(k_window)},
                                          {kc0 - k_window, kc0 + k_window},
                                          {kc1 - k_window, kc1 + k_window}});
        const double jl2 = -double(j) * std::numbers::ln2;
        const double s0 = std::ldexp(t0, j), s1 = std::ldexp(t1, j);
        for (const auto& [klo, khi] : intervals) {
            for (std::int64_t k = klo; k <= khi; ++k) {
                // the Psi(-k, theta) anchor terms cancel in the increment
                double inc = 0.0;
                double binom = 1.0, power = 1.0;
                for (int p = 0; p <= n; ++p) {
                    double diff = table.value(s1 - double(k), theta, n - p) -
                                  table.value(s0 - double(k), theta, n - p);
                    inc += binom * power * std::exp2(-j * theta) * diff;
                    power *= jl2;
                    binom = binom * double(n - p) / double(p + 1);
                }
                total += std::pow(std::abs(H.dyadic(k, j) - ht0), n) *
                         std::sqrt(std::log(3.0 + j + std::abs(double(k)))) * std::abs(inc);
            }
        }
    }
    return total;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            double tie = a[i];
            while (i < a.size() && a[i] == tie) ++i;
            while (j < b.size() && b[j] == tie) ++j;
        }
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

double ks_critical(double alpha, std::size_t n, std::size_t m) {
    double c;
    if (alpha <= 0.01)
        c = 1.628;
    else if (alpha <= 0.05)
        c = 1.358;
    else
        c = 1.224;  // alpha = 0.10
    return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic_normal(std::vector<double> a, double sigma) {
    std::sort(a.begin(), a.end());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double f = normal_cdf(a[i] / sigma);
        d = std::max(d, std::abs(f - double(i) / a.size()));
        d = std::max(d, std::abs(f - double(i + 1) / a.size()));
    }
    return d;
}

}  // namespace mbm::analysis
