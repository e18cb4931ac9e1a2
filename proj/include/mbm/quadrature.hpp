#pragma once

#include <vector>

namespace mbm {

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n);
};

// Cached rule, keyed by point count (thread-safe).
const GaussLegendre& gauss_legendre(int n);

}  // namespace mbm
