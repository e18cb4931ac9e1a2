#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <random>

#include "mbm/theory.hpp"

using namespace mbm::theory;

namespace {

// independent 1-D oracle: for each gamma the inner max over eta of
// min(f1, f3) has a closed-form crossing (f1 rises, f3 falls in eta)
double maxmin_oracle(double a, double b, double beta, int ell, double eps) {
    const double L = double(ell) - 1.0 - eps;
    double best = -1e300;
    const int n = 20000;
    for (int i = 1; i < n; ++i) {
        double gamma = double(i) / n;
        double eta = (gamma * (L + a) - a) / (beta + L);
        eta = std::clamp(eta, 0.0, gamma);
        double f1 = a + eta * beta;
        double f2 = 1.0 - gamma * (1.0 - a);
        double f3 = (gamma - eta) * L + gamma * a;
        best = std::max(best, std::min(f1, std::min(f2, f3)));
    }
    (void)b;
    return best;
}

}  // namespace

TEST_CASE("condition_19 at the reference points") {
    CHECK(condition_19(0.5, 0.5));
    CHECK(condition_19(0.45, 0.55));   // 0.45 > 0.1
    CHECK_FALSE(condition_19(0.1, 0.9));  // 0.1 < 0.8
    CHECK_THROWS_AS(condition_19(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(condition_19(0.6, 0.5), std::invalid_argument);
}

TEST_CASE("exponent_bound at the oracle-verified point (0.3, 0.4, beta=1, ell=20)") {
    // fine-grid and LP oracles give d = 0.699399, eta* = 0.399399, gamma* = 0.429430;
    // the third constraint is active at ell = 20, so the two-constraint closed
    // form a + beta(1-a)/(beta+1-a) = 0.711765 is only reached as ell -> inf
    auto r = exponent_bound(0.3, 0.4, 1.0, 20, 1e-3, 2000);
    CHECK(r.d == doctest::Approx(0.699399).epsilon(2e-4));
    CHECK(r.gamma_star == doctest::Approx(0.429430).epsilon(5e-3));
    CHECK(r.eta_star == doctest::Approx(0.399399).epsilon(5e-3));
    CHECK(r.feasible);

    auto rbig = exponent_bound(0.3, 0.4, 1.0, 2000, 1e-3, 2000);
    double closed_form = 0.3 + 1.0 * 0.7 / (1.0 + 0.7);
    CHECK(rbig.d == doctest::Approx(closed_form).epsilon(2e-3));
}

TEST_CASE("exponent_bound on the diagonal a = b is feasible") {
    for (double v : {0.2, 0.5, 0.8}) {
        auto r = exponent_bound(v, v, v, 4, 1e-3, 500);
        CHECK(r.feasible);
        CHECK(r.d > v);
        CHECK(r.eta_star > 0.0);
        CHECK(r.eta_star < r.gamma_star);
        CHECK(r.gamma_star < 1.0);
    }
}

TEST_CASE("exponent_bound is infeasible where condition 19 fails") {
    auto r = exponent_bound(0.1, 0.9, 0.9, 64, 1e-3, 500);
    CHECK_FALSE(r.feasible);
}

TEST_CASE("report invariants") {
    auto r = exponent_bound(0.45, 0.55, 1.0, 4, 1e-3, 1000);
    CHECK(r.feasible);
    CHECK(r.d > r.b);
    CHECK(r.d <= 1.0);
    double cmin = std::min({r.constraint_values[0], r.constraint_values[1],
                            r.constraint_values[2]});
    CHECK(r.d <= cmin + 1e-9);
    CHECK(r.d == doctest::Approx(0.742018).epsilon(1e-4));  // LP oracle value
}

TEST_CASE("d is monotone in ell and beta") {
    double prev = 0.0;
    for (int ell : {2, 3, 4, 8, 16, 64}) {
        auto r = exponent_bound(0.45, 0.55, 1.0, ell, 1e-3, 800);
        CHECK(r.d >= prev - 1e-9);
        prev = r.d;
    }
    auto lo = exponent_bound(0.45, 0.55, 0.55, 8, 1e-3, 800);
    auto hi = exponent_bound(0.45, 0.55, 1.0, 8, 1e-3, 800);
    CHECK(hi.d >= lo.d - 1e-9);
}

TEST_CASE("grid search + refinement agrees with the 1-D concave oracle") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ua(0.05, 0.9);
    for (int i = 0; i < 20; ++i) {
        double a = ua(rng);
        double b = a + (0.95 - a) * 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
        double beta = b + 0.5;
        int ell = 2 + int(i % 5) * 3;
        auto r = exponent_bound(a, b, beta, ell, 1e-3, 400);
        double want = std::min(maxmin_oracle(a, b, beta, ell, 1e-3), 1.0);
        CHECK(r.d == doctest::Approx(want).epsilon(2e-4));
    }
}

TEST_CASE("near-boundary cells need ell far beyond 64 (documented limitation)") {
    // (0.17, 0.47) satisfies condition 19 with gap 2.6e-4; at ell = 64 the
    // third constraint forces d < b, and feasibility only returns near ell ~ 2048
    CHECK(condition_19(0.17, 0.47));
    CHECK_FALSE(exponent_bound(0.17, 0.47, 0.47, 64, 1e-3, 800).feasible);
    CHECK(exponent_bound(0.17, 0.47, 0.47, 4096, 1e-3, 800).feasible);
}

TEST_CASE("region raster matches pointwise condition calls and spans the square") {
    auto raster = region_raster(50);
    CHECK(raster.size() == 2500);
    int checked = 0;
    for (const auto& cell : raster) {
        if (cell.a <= cell.b) {
            CHECK(cell.feasible == condition_19(cell.a, cell.b));
            ++checked;
        } else {
            CHECK_FALSE(cell.feasible);
        }
        if (std::abs(cell.a - cell.b) < 1e-12) CHECK(cell.feasible);  // diagonal
    }
    CHECK(checked == 1275);
    CHECK_THROWS_AS(region_raster(5), std::invalid_argument);
}

TEST_CASE("row a = 0.5 flips at b* = (0.5 + sqrt(1.25))/2") {
    double b_star = 0.5 * (0.5 + std::sqrt(1.25));
    auto raster = region_raster(101);
    double last_true = 0.0, first_false_after = 1.0;
    for (const auto& cell : raster) {
        if (std::abs(cell.a - 0.5) > 1e-12 || cell.b < 0.5) continue;
        if (cell.feasible) last_true = std::max(last_true, cell.b);
    }
    for (const auto& cell : raster) {
        if (std::abs(cell.a - 0.5) > 1e-12 || cell.b <= last_true) continue;
        first_false_after = std::min(first_false_after, cell.b);
    }
    CHECK(last_true < b_star);
    CHECK(first_false_after > b_star);
    CHECK(std::abs(last_true - b_star) <= 1.0 / 101.0);
}
