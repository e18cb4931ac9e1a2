#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mbm {

// Functional parameter H(.) with range [a,b] subset (0,1) and Holder order beta.
// The step kind is piecewise constant and falls outside the standing assumption
// beta > b; within_theorem() reports that.
class HurstFunction {
public:
    enum class Kind { constant, sine, logistic, piecewise, step, table };

    static HurstFunction constant(double value);
    static HurstFunction sine(double mean, double amp, double freq = 1.0, double phase = 0.0);
    static HurstFunction logistic(double lo, double hi, double center, double rate);
    // nodes: (t, H) pairs, strictly increasing in t; linear in between,
    // constant outside.
    static HurstFunction piecewise(std::vector<std::pair<double, double>> nodes);
    // breaks: strictly increasing; values has breaks.size()+1 entries,
    // right-continuous steps.
    static HurstFunction step(std::vector<double> breaks, std::vector<double> values);
    // values sampled on the uniform grid [t0, t1], linear interpolation.
    static HurstFunction table(double t0, double t1, std::vector<double> values);

    double operator()(double t) const;
    // H(k/2^j); the dyadic argument k*2^-j is exact in double precision.
    double dyadic(std::int64_t k, int j) const;

    double range_lo() const { return a_; }
    double range_hi() const { return b_; }
    double holder_order() const { return beta_; }
    double holder_constant() const { return c1_; }
    bool within_theorem() const { return kind_ != Kind::step && beta_ > b_; }
    Kind kind() const { return kind_; }
    std::string describe() const;

private:
    HurstFunction() = default;
    void check_range() const;

    Kind kind_ = Kind::constant;
    double a_ = 0.0, b_ = 0.0;
    double beta_ = 1.0, c1_ = 0.0;
    // parameters, meaning depends on kind
    double p0_ = 0, p1_ = 0, p2_ = 0, p3_ = 0;
    std::vector<double> knots_;
    std::vector<double> levels_;
};

}  // namespace mbm
