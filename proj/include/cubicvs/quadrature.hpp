#pragma once

#include <vector>

namespace cubicvs {

// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached per n; safe to call concurrently.
const GaussRule& gauss_legendre(int n);

}  // namespace cubicvs
