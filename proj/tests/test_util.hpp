#pragma once

#include <cmath>
#include <vector>

#include "ppsim/rng.hpp"

namespace ppsim::testutil {

// Independent brute-force grid sum Delta * sum_{k=1}^{n} h(k*Delta).
template <typename H>
double grid_sum_oracle(const H& h, double delta, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += h(static_cast<double>(k) * delta);
    return delta * s;
}

// Midpoint-rule quadrature of h over [0, hi].
template <typename H>
double quadrature_oracle(const H& h, double hi, std::size_t n = 1000000) {
    const double dx = hi / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += h((static_cast<double>(i) + 0.5) * dx);
    return s * dx;
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace ppsim::testutil
