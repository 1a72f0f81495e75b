#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ppsim/rng.hpp"

namespace ppsim::stats {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

// Mean with the i.i.d. standard error sd/sqrt(n).
[[nodiscard]] MeanSe mean_se(const std::vector<double>& xs);

// Mean of a stationary but serially dependent sample; the standard error
// comes from non-overlapping batch means.
[[nodiscard]] MeanSe batch_means_se(const std::vector<double>& xs, std::size_t n_batches);

// Unbiased sample variance (n-1 denominator).
[[nodiscard]] double sample_variance(const std::vector<double>& xs);

// Wasserstein-1 distance between the empirical distributions of two samples:
// the integral of |F_a - F_b|, exact on sorted samples. Throws EmptySamples.
[[nodiscard]] double w1_distance(std::vector<double> a, std::vector<double> b);

// Bootstrap standard error of w1_distance under resampling both sides.
[[nodiscard]] double w1_bootstrap_se(const std::vector<double>& a, const std::vector<double>& b,
                                     std::size_t n_boot, RngStream& rng);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| and its asymptotic
// p-value (conservative under heavy ties).
[[nodiscard]] double ks_statistic(std::vector<double> a, std::vector<double> b);
[[nodiscard]] double ks_pvalue(double d, std::size_t n, std::size_t m);

// Upper regularized incomplete gamma Q(a, x) and the chi-square survival
// function built on it.
[[nodiscard]] double gamma_q(double a, double x);
[[nodiscard]] double chi2_sf(double x, double dof);

// Two-sample chi-square equality test on integer samples. Adjacent values are
// pooled until each cell holds at least min_pooled observations combined.
[[nodiscard]] double chi2_two_sample_pvalue(const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b,
                                            double min_pooled = 10.0);

// Goodness-of-fit chi-square of integer samples against a pmf; cells with
// expected count below min_expected are pooled from the right.
[[nodiscard]] double chi2_gof_pvalue(const std::vector<std::int64_t>& samples,
                                     const std::function<double(std::int64_t)>& pmf,
                                     double min_expected = 5.0);

}  // namespace ppsim::stats
