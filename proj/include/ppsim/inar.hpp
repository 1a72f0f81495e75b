#pragma once

#include <cstdint>
#include <vector>

#include "ppsim/rng.hpp"
#include "ppsim/types.hpp"

namespace ppsim::inar {

// Poisson thinning alpha o y: sum of y i.i.d. Pois(alpha) counting variables,
// drawn as a single Pois(alpha * y) variate.
std::int64_t thin(double alpha, std::int64_t y, RngStream& rng);

// Bernoulli-thinning variant: Binomial(y, alpha). Throws InvalidProbability
// for alpha outside [0, 1].
std::int64_t thin_bernoulli(double alpha, std::int64_t y, RngStream& rng);

struct CountingPmfRatio {
    double value = 0.0;
    // True for n in {0, 1} where the Bernoulli pmf is positive and the value
    // is the Poisson/Bernoulli ratio; false for n >= 2, where the value is
    // the Poisson pmf alone.
    bool bernoulli_supported = false;
};

// P[Pois(delta*alpha) = n] / P[Bernoulli(delta*alpha) = n] for n in {0, 1}.
[[nodiscard]] CountingPmfRatio counting_pmf_ratio(double alpha, double delta, std::int64_t n);

// Burn-in long enough that the zero pre-history is forgotten: at least 1000
// steps, scaled by 1/(1-K) near criticality.
[[nodiscard]] std::size_t default_burn_in(const InarParams& params);

// Forward simulation of X_n = eps_n + sum_k alpha_k o X_{n-k} from an all-zero
// pre-history; the first burn_in values are discarded. Conditionally on the
// past, X_n is Pois(alpha0 + sum_k alpha_k X_{n-k}), which is what gets drawn.
[[nodiscard]] CountSeries simulate(const InarParams& params, std::size_t n_steps,
                                   std::size_t burn_in, RngStream& rng);

// One family: the cascade of generations spawned by a single ancestor at
// step 0, stopped at the horizon (offspring landing beyond it are never
// generated) or when a generation dies out inside it.
struct FamilyRealization {
    std::size_t horizon = 0;
    std::vector<std::vector<std::int64_t>> per_generation;  // [g][n]
    std::vector<std::int64_t> family;                       // F_n = sum_g G^(g)_n
    std::vector<std::int64_t> generation_sizes;             // Y_g = sum_n G^(g)_n
    std::int64_t total_size = 0;                            // S = sum_n F_n
};

[[nodiscard]] FamilyRealization simulate_family(const InarParams& params, std::size_t horizon,
                                                RngStream& rng);

// Steps of pre-window immigration needed so families ignited before the
// window contribute less than tol expected counts per step.
[[nodiscard]] std::size_t default_lookback(const InarParams& params, double tol = 1e-6);

// Branching-form simulation: Pois(alpha0) immigrants per step on
// [-lookback, n_steps), each spawning an independent family overlaid onto the
// counts. Distributionally equivalent to simulate() modulo truncation error.
[[nodiscard]] CountSeries simulate_branching(const InarParams& params, std::size_t n_steps,
                                             std::size_t lookback, RngStream& rng);

// Moving-average weights: beta_0 = 1, beta_k = sum_i alpha_i beta_{k-i}.
// Partial sums increase to 1/(1 - alpha_sum).
[[nodiscard]] std::vector<double> beta_coeffs(const InarParams& params, std::size_t n_max);

// Stationary mean alpha0 / (1 - K).
[[nodiscard]] double mean(const InarParams& params);

// Autocovariances R(0..max_lag) = alpha0/(1-K) * sum_k beta_k beta_{k+j},
// truncated so the neglected tail contributes less than tol to every lag.
[[nodiscard]] std::vector<double> autocovariance(const InarParams& params, std::size_t max_lag,
                                                 double tol = 1e-9);

// AR residuals u_n = X_n - sum_k alpha_k X_{n-k} - alpha0 for every index
// where the lag window fits; the initial window is dropped.
[[nodiscard]] std::vector<double> residuals(const CountSeries& series, const InarParams& params);

// Joint moment-generating function E exp{sum_n t_n X_n} for nonpositive
// arguments, evaluated by the exact family recursion over shift offsets.
[[nodiscard]] double mgf(const InarParams& params, const FiniteSupportSeq& t_seq,
                         double tol = 1e-9);

// INAR(p) embedding: keep the first p reproduction coefficients, drop the rest
// and the tail bound.
[[nodiscard]] InarParams truncate(const InarParams& params, std::size_t p);

}  // namespace ppsim::inar
