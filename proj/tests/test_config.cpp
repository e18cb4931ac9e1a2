#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mbm/config.hpp"

using namespace mbm;

TEST_CASE("empty document yields all defaults") {
    auto cfg = parse_config("");
    CHECK(cfg.seed == 0);
    CHECK(cfg.threads == 0);
    CHECK(cfg.replicates == 2000);
    CHECK(cfg.t_points == 1025);
    CHECK(cfg.k_window == 50);
    CHECK(cfg.out_dir == "./out");
    CHECK(cfg.lags.size() == 6);  // 2^-9 .. 2^-4
    CHECK(cfg.lags.front() == doctest::Approx(std::ldexp(1.0, -9)));
    CHECK(cfg.lags.back() == doctest::Approx(std::ldexp(1.0, -4)));
    CHECK(cfg.hurst.kind == "constant");
}

TEST_CASE("a > b is rejected with the documented message") {
    CHECK_THROWS_WITH_AS(parse_config("a = 0.6\nb = 0.5\n"), "a must be <= b",
                         std::invalid_argument);
}

TEST_CASE("unknown keys are rejected by name") {
    try {
        parse_config("frobnicate = 1\n");
        FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
    }
}

TEST_CASE("sine hurst keys produce the expected range") {
    auto cfg = parse_config("hurst.kind = sine\nhurst.mean = 0.5\nhurst.amp = 0.3\n");
    auto h = make_hurst(cfg);
    CHECK(h.range_lo() == doctest::Approx(0.2));
    CHECK(h.range_hi() == doctest::Approx(0.8));
}

TEST_CASE("comments, blanks and whitespace are tolerated") {
    auto cfg = parse_config("# a comment\n\n  seed =  7   # trailing\n\tj_max = 10\n");
    CHECK(cfg.seed == 7);
    CHECK(cfg.j_max == 10);
}

TEST_CASE("lag syntax variants") {
    CHECK(parse_lags("2^-9..2^-4").size() == 6);
    CHECK(parse_lags("2^-4..2^-9").size() == 6);  // order normalized
    auto l = parse_lags("0.25, 0.5, 0.125");
    CHECK(l.size() == 3);
    CHECK(l.front() == 0.125);
    CHECK_THROWS_AS(parse_lags("nope"), std::invalid_argument);
}

TEST_CASE("piecewise, step and table kinds parse") {
    auto p = parse_config("hurst.kind = piecewise\nhurst.nodes = 0:0.3, 0.5:0.7, 1:0.4\n");
    auto hp = make_hurst(p);
    CHECK(hp(0.25) == doctest::Approx(0.5));

    auto s = parse_config("hurst.kind = step\nhurst.breaks = 0.5\nhurst.values = 0.3, 0.7\n");
    auto hs = make_hurst(s);
    CHECK(hs(0.2) == 0.3);
    CHECK_FALSE(hs.within_theorem());

    auto t = parse_config(
        "hurst.kind = table\nhurst.t0 = 0\nhurst.t1 = 1\nhurst.values = 0.3, 0.5, 0.4\n");
    CHECK(make_hurst(t)(0.5) == doctest::Approx(0.5));
}

TEST_CASE("cross-field invariants") {
    CHECK_THROWS_AS(parse_config("j_min = 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("replicates = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("t_start = 1\nt_end = 0.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("a = 0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("seed"), std::invalid_argument);  // no '='
    CHECK_THROWS_AS(parse_config("seed = zebra\n"), std::invalid_argument);
}
