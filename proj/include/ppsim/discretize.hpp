#pragma once

#include <cstddef>
#include <optional>

#include "ppsim/kernel.hpp"
#include "ppsim/types.hpp"

namespace ppsim {

// K^(Delta) = Delta * sum_{k>=1} h(k*Delta), with a family-specific exact tail
// (geometric closed form for exponential kernels, finite sums otherwise).
// Throws DiscretizationSupercritical when the sum reaches 1 - the grid is too
// coarse to carry a stationary model.
[[nodiscard]] double k_delta(const ReproductionKernel& kernel, double delta);

struct DiscretizeOptions {
    // Dropped tail mass must stay below tail_rel_tol * K^(Delta) when the
    // truncation horizon is chosen automatically.
    double tail_rel_tol = 1e-10;
    // Hard cap on the coefficient vector length; exceeding it raises TailTooHeavy.
    std::size_t max_coeffs = 1000000;
    // Optional explicit truncation horizon (time units); coefficients are kept
    // for k*Delta <= trunc_horizon and the exact remainder goes to tail_bound.
    std::optional<double> trunc_horizon;
};

// InarParams with alpha0 = Delta*eta and alpha_k = Delta*h(k*Delta); the grid
// tail beyond the truncation horizon is accounted exactly in tail_bound, so
// the reproduction mean of the result equals K^(Delta).
[[nodiscard]] InarParams discretize(double eta, const ReproductionKernel& kernel, double delta,
                                    const DiscretizeOptions& opts = {});

}  // namespace ppsim
