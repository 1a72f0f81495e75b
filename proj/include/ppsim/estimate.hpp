#pragma once

#include <cstddef>
#include <vector>

#include "ppsim/types.hpp"

namespace ppsim::estimate {

struct LsFit {
    double alpha0_hat = 0.0;
    std::vector<double> alphas_hat;
    double residual_variance = 0.0;
};

// Ordinary least squares of X_n on (1, X_{n-1}, ..., X_{n-p}). Coefficients
// are deliberately unconstrained: negative estimates are reported, not
// clipped. Throws SeriesTooShort (length must exceed p + 10) and
// SingularDesign (e.g. constant series).
[[nodiscard]] LsFit fit_inar_ls(const CountSeries& series, std::size_t p);

struct KernelEstimate {
    double delta = 0.0;
    double eta_hat = 0.0;
    std::vector<double> h_hat;  // hhat(k*delta), k = 1..p
    double residual_variance = 0.0;
};

// The bin-count estimation sketch: fit an INAR(p) by least squares and read
// off eta_hat = alpha0_hat/delta, hhat(k*delta) = alphahat_k/delta.
[[nodiscard]] KernelEstimate kernel_from_bins(const CountSeries& series, double delta,
                                              std::size_t p);

}  // namespace ppsim::estimate
