#pragma once

#include <cstdint>
#include <vector>

#include "ppsim/kernel.hpp"
#include "ppsim/rng.hpp"
#include "ppsim/types.hpp"

namespace ppsim::hawkes {

// Immigration intensity eta > 0 plus a subcritical reproduction kernel.
class Model {
  public:
    Model(double eta, ReproductionKernel kernel);

    [[nodiscard]] double eta() const { return eta_; }
    [[nodiscard]] const ReproductionKernel& kernel() const { return kernel_; }

  private:
    double eta_;
    ReproductionKernel kernel_;
};

// Pre-window margin so that families ignited before the window leave fewer
// than expected_missed expected events inside it.
[[nodiscard]] double default_lookback(const Model& model, double expected_missed = 1e-3);

// A simulated window with its branching bookkeeping. parent_index[i] is the
// index of event i's parent within the pattern, -1 for immigrants, and -2 for
// offspring whose parent fell outside the retained window. generation[i] is
// the cascade depth (0 for immigrants).
struct ClusterRealization {
    PointPattern pattern;
    std::vector<std::int64_t> parent_index;
    std::vector<std::int64_t> generation;
};

// Branching construction: immigrants from a homogeneous Poisson process of
// rate eta on (a - lookback, b]; every event spawns Pois(K) children displaced
// by the density h/K, recursively. Events beyond b are never generated.
[[nodiscard]] ClusterRealization simulate_cluster(const Model& model, Window window,
                                                  double lookback, RngStream& rng);

// Independent oracle: accept/reject thinning against a dominating rate that
// is refreshed after every proposal and acceptance.
[[nodiscard]] PointPattern simulate_thinning(const Model& model, Window window, double lookback,
                                             RngStream& rng);

// Conditional intensity eta + sum_{s < t} h(t - s).
[[nodiscard]] double intensity(const Model& model, const PointPattern& pattern, double t);

// Counts per bin ((n-1)*delta, n*delta] over a grid-aligned window.
[[nodiscard]] CountSeries bin_counts(const PointPattern& pattern, double delta, Window window);

// Nonnegative step function on a Delta-grid: value heights[i] on
// (origin + i*delta, origin + (i+1)*delta], zero elsewhere.
struct GridStepFn {
    double origin = 0.0;
    double delta = 1.0;
    std::vector<double> heights;

    [[nodiscard]] double operator()(double t) const;
};

struct LaplaceEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Monte Carlo Laplace functional: mean of exp{-sum_events f(t)} over the
// given patterns, with its standard error.
[[nodiscard]] LaplaceEstimate laplace_mc(const std::vector<PointPattern>& patterns,
                                         const GridStepFn& f, Window window);

}  // namespace ppsim::hawkes
