#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "ppsim/rng.hpp"

namespace ppsim {

// h(t) = scale * exp(-decay * t) for t > 0.
struct ExponentialKernel {
    double scale = 0.0;
    double decay = 1.0;
};

// h(t) = height for 0 < t <= width.
struct StepKernel {
    double height = 0.0;
    double width = 1.0;
};

// Piecewise-linear h through (0, 0) and the given knots (t_i, h_i) with
// 0 < t_1 < t_2 < ..., zero beyond the last knot.
struct TableKernel {
    std::vector<std::pair<double, double>> knots;
};

// A reproduction intensity h: nonnegative, h(t) = 0 for t <= 0, piecewise
// continuous with a finite jump set. Kernels are closed families so that the
// mass K = int h, grid sums and tail masses all have exact forms; there is no
// quadrature anywhere near the subcriticality checks.
class ReproductionKernel {
  public:
    using Family = std::variant<ExponentialKernel, StepKernel, TableKernel>;

    static ReproductionKernel exponential(double scale, double decay);
    static ReproductionKernel step(double height, double width);
    static ReproductionKernel table(std::vector<std::pair<double, double>> knots);

    // h(t); exactly 0 for t <= 0.
    [[nodiscard]] double operator()(double t) const;

    // K = int_0^inf h(t) dt.
    [[nodiscard]] double mass() const;

    // int_t^inf h(s) ds.
    [[nodiscard]] double tail_mass(double t) const;

    // End of the support: +inf for exponential kernels.
    [[nodiscard]] double support_end() const;

    // sup_{s > t} h(s); the dominating rate used by the thinning simulator.
    [[nodiscard]] double sup_after(double t) const;

    // Jump points of h, including 0 when h(0+) > 0.
    [[nodiscard]] std::vector<double> discontinuities() const;

    // One draw from the offspring displacement density h(.)/K on (0, inf),
    // by family-specific inverse transform. Requires mass() > 0.
    [[nodiscard]] double sample_displacement(RngStream& rng) const;

    [[nodiscard]] const Family& family() const { return family_; }

  private:
    explicit ReproductionKernel(Family family);

    Family family_;
    // Cumulative trapezoid areas between consecutive table nodes (with the
    // implicit origin prepended); empty for the other families.
    std::vector<double> table_cum_;
};

}  // namespace ppsim
