#include "mbm/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mbm {

void HurstFunction::check_range() const {
    if (!(a_ > 0.0 && a_ <= b_ && b_ < 1.0))
        throw std::invalid_argument("HurstFunction: range [a,b] must satisfy 0 < a <= b < 1");
}

HurstFunction HurstFunction::constant(double value) {
    HurstFunction h;
    h.kind_ = Kind::constant;
    h.p0_ = value;
    h.a_ = h.b_ = value;
    h.beta_ = 1.0;
    h.c1_ = 0.0;
    h.check_range();
    return h;
}

HurstFunction HurstFunction::sine(double mean, double amp, double freq, double phase) {
    HurstFunction h;
    h.kind_ = Kind::sine;
    h.p0_ = mean;
    h.p1_ = amp;
    h.p2_ = freq;
    h.p3_ = phase;
    h.a_ = mean - std::abs(amp);
    h.b_ = mean + std::abs(amp);
    h.beta_ = 1.0;
    h.c1_ = std::abs(amp) * 2.0 * std::numbers::pi * std::abs(freq);
    h.check_range();
    return h;
}

HurstFunction HurstFunction::logistic(double lo, double hi, double center, double rate) {
    if (!(hi > lo) || !(rate > 0.0))
        throw std::invalid_argument("HurstFunction::logistic: need hi > lo and rate > 0");
    HurstFunction h;
    h.kind_ = Kind::logistic;
    h.p0_ = lo;
    h.p1_ = hi;
    h.p2_ = center;
    h.p3_ = rate;
    h.a_ = lo;
    h.b_ = hi;
    h.beta_ = 1.0;
    h.c1_ = (hi - lo) * rate / 4.0;
    h.check_range();
    return h;
}

HurstFunction HurstFunction::piecewise(std::vector<std::pair<double, double>> nodes) {
    if (nodes.size() < 2)
        throw std::invalid_argument("HurstFunction::piecewise: need at least two nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i].first > nodes[i - 1].first))
            throw std::invalid_argument("HurstFunction::piecewise: nodes must increase in t");
    HurstFunction h;
    h.kind_ = Kind::piecewise;
    double slope = 0.0;
    for (auto& [t, v] : nodes) {
        h.knots_.push_back(t);
        h.levels_.push_back(v);
    }
    h.a_ = *std::min_element(h.levels_.begin(), h.levels_.end());
    h.b_ = *std::max_element(h.levels_.begin(), h.levels_.end());
    for (std::size_t i = 1; i < nodes.size(); ++i)
        slope = std::max(slope, std::abs((h.levels_[i] - h.levels_[i - 1]) /
                                         (h.knots_[i] - h.knots_[i - 1])));
    h.beta_ = 1.0;
    h.c1_ = slope;
    h.check_range();
    return h;
}

HurstFunction HurstFunction::step(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1)
        throw std::invalid_argument("HurstFunction::step: need breaks.size()+1 values");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (!(breaks[i] > breaks[i - 1]))
            throw std::invalid_argument("HurstFunction::step: breaks must increase");
    HurstFunction h;
    h.kind_ = Kind::step;
    h.knots_ = std::move(breaks);
    h.levels_ = std::move(values);
    h.a_ = *std::min_element(h.levels_.begin(), h.levels_.end());
    h.b_ = *std::max_element(h.levels_.begin(), h.levels_.end());
    h.beta_ = 0.0;  // not Holder continuous; outside the theorem's hypotheses
    h.c1_ = 0.0;
    h.check_range();
    return h;
}

HurstFunction HurstFunction::table(double t0, double t1, std::vector<double> values) {
    if (values.size() < 2 || !(t1 > t0))
        throw std::invalid_argument("HurstFunction::table: need t1 > t0 and >= 2 values");
    std::vector<std::pair<double, double>> nodes;
    double dt = (t1 - t0) / double(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        nodes.emplace_back(t0 + double(i) * dt, values[i]);
    HurstFunction h = piecewise(std::move(nodes));
    h.kind_ = Kind::table;
    return h;
}

double HurstFunction::operator()(double t) const {
    switch (kind_) {
        case Kind::constant:
            return p0_;
        case Kind::sine:
            return p0_ + p1_ * std::sin(2.0 * std::numbers::pi * p2_ * t + p3_);
        case Kind::logistic:
            return p0_ + (p1_ - p0_) / (1.0 + std::exp(-p3_ * (t - p2_)));
        case Kind::step: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            return levels_[static_cast<std::size_t>(it - knots_.begin())];
        }
        case Kind::piecewise:
        case Kind::table: {
            if (t <= knots_.front()) return levels_.front();
            if (t >= knots_.back()) return levels_.back();
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
            std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            double w = (t - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
            return levels_[i - 1] + w * (levels_[i] - levels_[i - 1]);
        }
    }
    return p0_;
}

double HurstFunction::dyadic(std::int64_t k, int j) const {
    return (*this)(std::ldexp(static_cast<double>(k), -j));
}

std::string HurstFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant: os << "constant(" << p0_ << ")"; break;
        case Kind::sine: os << "sine(mean=" << p0_ << ",amp=" << p1_ << ",freq=" << p2_
                            << ",phase=" << p3_ << ")"; break;
        case Kind::logistic: os << "logistic(lo=" << p0_ << ",hi=" << p1_ << ",center=" << p2_
                                << ",rate=" << p3_ << ")"; break;
        case Kind::piecewise: os << "piecewise(" << knots_.size() << " nodes)"; break;
        case Kind::step: os << "step(" << knots_.size() << " breaks)"; break;
        case Kind::table: os << "table(" << knots_.size() << " samples)"; break;
    }
    os << " range=[" << a_ << "," << b_ << "]";
    return os.str();
}

}  // namespace mbm
