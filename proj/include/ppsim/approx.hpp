#pragma once

#include <cstdint>
#include <vector>

#include "ppsim/discretize.hpp"
#include "ppsim/hawkes.hpp"
#include "ppsim/types.hpp"

namespace ppsim::approx {

// The approximating INAR parameters of a Hawkes model at grid width delta:
// alpha0 = delta*eta, alpha_k = delta*h(k*delta). The reproduction mean of the
// result is K^(delta).
[[nodiscard]] InarParams build_inar(const hawkes::Model& model, double delta,
                                    const DiscretizeOptions& opts = {});

// Wasserstein-1 distance between two empirical count distributions.
[[nodiscard]] double count_distribution_distance(const std::vector<double>& a,
                                                 const std::vector<double>& b);

struct ConvergenceRow {
    double delta = 0.0;
    double k_delta = 0.0;
    double mean_gap = 0.0;  // |eta/(1-K^(d)) - eta/(1-K)|, closed forms
    double w1_window1 = 0.0;
    double w1_window1_se = 0.0;
    double w1_window2 = 0.0;
    double w1_window2_se = 0.0;
    double var_gap = 0.0;  // |Var inar - Var hawkes| on the first test window
    std::size_t reps = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double target_rate = 0.0;  // eta/(1-K)
};

struct SweepOptions {
    std::size_t w1_bootstrap = 100;
    unsigned threads = 0;
};

// Monte Carlo convergence check of the discretization: per delta, compare the
// distribution of Hawkes counts against INAR window sums on the unit test
// windows (a, a+1] and (a+1, a+2]. The window must cover both.
[[nodiscard]] ConvergenceReport convergence_sweep(const hawkes::Model& model,
                                                  const std::vector<double>& deltas, Window window,
                                                  std::size_t reps, RngStream& rng,
                                                  const SweepOptions& opts = {});

// max_{1<=n<=max_lag} |R(n) - sum_k alpha_k R(|n-k|)|.
[[nodiscard]] double yule_walker_residual(const InarParams& params, std::size_t max_lag,
                                          double tol = 1e-10);

// |LHS - RHS| of the variance identity at the origin in Delta^2-rescaled
// units, for params built from (eta, kernel, delta).
[[nodiscard]] double variance_identity_residual(const InarParams& params, double eta, double delta,
                                                double tol = 1e-10);

}  // namespace ppsim::approx
