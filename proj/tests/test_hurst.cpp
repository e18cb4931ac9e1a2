#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mbm/hurst.hpp"

using mbm::HurstFunction;

TEST_CASE("constant and sine ranges") {
    auto c = HurstFunction::constant(0.6);
    CHECK(c(0.1) == 0.6);
    CHECK(c.range_lo() == 0.6);
    CHECK(c.range_hi() == 0.6);

    auto s = HurstFunction::sine(0.5, 0.3);
    CHECK(s.range_lo() == doctest::Approx(0.2));
    CHECK(s.range_hi() == doctest::Approx(0.8));
    CHECK(s(0.25) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s.within_theorem());
}

TEST_CASE("range violations are rejected") {
    CHECK_THROWS_AS(HurstFunction::constant(0.0), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::constant(1.0), std::invalid_argument);
    CHECK_THROWS_AS(HurstFunction::sine(0.5, 0.6), std::invalid_argument);
}

TEST_CASE("range bounds hold on a dense grid") {
    auto s = HurstFunction::sine(0.5, 0.3, 2.0, 0.7);
    auto l = HurstFunction::logistic(0.3, 0.7, 0.5, 10.0);
    for (int i = 0; i <= 5000; ++i) {
        double t = -1.0 + 3.0 * double(i) / 5000.0;
        CHECK(s(t) >= s.range_lo() - 1e-12);
        CHECK(s(t) <= s.range_hi() + 1e-12);
        CHECK(l(t) >= l.range_lo() - 1e-12);
        CHECK(l(t) <= l.range_hi() + 1e-12);
    }
}

TEST_CASE("holder condition |H(t1)-H(t2)| <= c1 |t1-t2|^beta on sampled pairs") {
    auto s = HurstFunction::sine(0.5, 0.25, 1.5);
    auto l = HurstFunction::logistic(0.25, 0.75, 0.4, 6.0);
    auto p = HurstFunction::piecewise({{0.0, 0.3}, {0.4, 0.7}, {1.0, 0.5}});
    for (const auto& h : {s, l, p}) {
        CHECK(h.holder_order() == 1.0);
        for (int i = 0; i < 400; ++i) {
            double t1 = double(i) / 400.0;
            double t2 = t1 + 0.003 * (1 + i % 7);
            CHECK(std::abs(h(t1) - h(t2)) <=
                  h.holder_constant() * std::abs(t1 - t2) + 1e-12);
        }
    }
}

TEST_CASE("dyadic evaluation is exact") {
    auto s = HurstFunction::sine(0.5, 0.3);
    CHECK(s.dyadic(3, 2) == s(0.75));
    CHECK(s.dyadic(-5, 3) == s(-0.625));
    CHECK(s.dyadic(1 << 20, 21) == s(0.5));
}

TEST_CASE("piecewise interpolates and clamps") {
    auto p = HurstFunction::piecewise({{0.0, 0.3}, {1.0, 0.7}});
    CHECK(p(0.5) == doctest::Approx(0.5));
    CHECK(p(-2.0) == 0.3);
    CHECK(p(3.0) == 0.7);
    CHECK_THROWS_AS(HurstFunction::piecewise({{0.5, 0.4}, {0.5, 0.6}}), std::invalid_argument);
}

TEST_CASE("step is right-continuous and flagged outside the theorem") {
    auto st = HurstFunction::step({0.5}, {0.3, 0.7});
    CHECK(st(0.49) == 0.3);
    CHECK(st(0.5) == 0.7);  // value at the break is the right limit
    CHECK(st(0.51) == 0.7);
    CHECK_FALSE(st.within_theorem());
    CHECK(st.holder_order() == 0.0);
}

TEST_CASE("table kind matches manual linear interpolation") {
    auto tb = HurstFunction::table(0.0, 1.0, {0.3, 0.5, 0.4});
    CHECK(tb(0.25) == doctest::Approx(0.4));
    CHECK(tb(0.75) == doctest::Approx(0.45));
    CHECK(tb.range_lo() == doctest::Approx(0.3));
    CHECK(tb.range_hi() == doctest::Approx(0.5));
}
