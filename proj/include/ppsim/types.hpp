#pragma once

#include <cstdint>
#include <vector>

namespace ppsim {

// Half-open observation window (a, b].
struct Window {
    double a = 0.0;
    double b = 0.0;

    [[nodiscard]] double length() const { return b - a; }
    [[nodiscard]] bool contains(double t) const { return t > a && t <= b; }
};

// A finite point pattern: sorted event times inside a window. Duplicate
// times are allowed (the process may place multiple points at one instant).
struct PointPattern {
    Window window;
    std::vector<double> times;

    // Throws InvalidParams when times are unsorted or escape the window.
    void validate() const;
};

// Integer counts on a Delta-grid; entry i is the value at index start_index + i.
// Grid convention: X_n lives at time n*delta, bin n covers ((n-1)*delta, n*delta].
struct CountSeries {
    double delta = 1.0;
    std::int64_t start_index = 0;
    std::vector<std::int64_t> counts;
};

// Immigration parameter alpha0 plus reproduction coefficients alpha_1..alpha_p.
// tail_bound covers the mass sum_{k>p} alpha_k of any conceptual infinite tail
// dropped by truncation; the reproduction mean K = sum alphas + tail_bound must
// stay strictly below 1.
class InarParams {
  public:
    InarParams(double alpha0, std::vector<double> alphas, double tail_bound = 0.0);

    [[nodiscard]] double alpha0() const { return alpha0_; }
    [[nodiscard]] const std::vector<double>& alphas() const { return alphas_; }
    [[nodiscard]] double tail_bound() const { return tail_bound_; }

    // Number of explicit reproduction lags.
    [[nodiscard]] std::size_t order() const { return alphas_.size(); }

    // Sum of the explicit coefficients only. Exact recursions (beta weights,
    // autocovariances, the joint MGF) see precisely these lags, so their
    // identities are stated against this value.
    [[nodiscard]] double alpha_sum() const { return alpha_sum_; }

    // K = alpha_sum() + tail_bound(), the reproduction mean of the full model.
    [[nodiscard]] double reproduction_mean() const { return alpha_sum_ + tail_bound_; }

  private:
    double alpha0_;
    std::vector<double> alphas_;
    double tail_bound_;
    double alpha_sum_;
};

// Argument sequence (t_0, ..., t_d) for MGF/Laplace evaluation; conceptually
// zero beyond the stored values.
struct FiniteSupportSeq {
    std::vector<double> values;

    // Largest index with a nonzero entry, or -1 when the sequence vanishes.
    [[nodiscard]] std::int64_t support() const;
};

}  // namespace ppsim
