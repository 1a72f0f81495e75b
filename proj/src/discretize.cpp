#include "ppsim/discretize.hpp"

#include <cmath>

#include "ppsim/errors.hpp"

namespace ppsim {

namespace {

constexpr double kEdgeTol = 1e-12;

// Delta * sum_{k > m} h(k*Delta), exact per family.
double grid_tail(const ReproductionKernel& kernel, double delta, std::size_t m) {
    if (const auto* e = std::get_if<ExponentialKernel>(&kernel.family())) {
        if (e->scale == 0.0) return 0.0;
        const double q = std::exp(-e->decay * delta);
        const double denom = -std::expm1(-e->decay * delta);
        return delta * e->scale * std::exp(-e->decay * delta * static_cast<double>(m)) * q / denom;
    }
    const double end = kernel.support_end() * (1.0 + kEdgeTol);
    double sum = 0.0;
    for (std::size_t k = m + 1;; ++k) {
        const double t = static_cast<double>(k) * delta;
        if (t > end) break;
        sum += kernel(t);
    }
    return delta * sum;
}

double k_delta_value(const ReproductionKernel& kernel, double delta) {
    return grid_tail(kernel, delta, 0);
}

}  // namespace

double k_delta(const ReproductionKernel& kernel, double delta) {
    if (!(std::isfinite(delta) && delta > 0.0))
        throw InvalidParams("k_delta: delta must be > 0");
    const double value = k_delta_value(kernel, delta);
    if (value >= 1.0)
        throw DiscretizationSupercritical("k_delta: K^(Delta) >= 1, grid too coarse for this kernel");
    return value;
}

InarParams discretize(double eta, const ReproductionKernel& kernel, double delta,
                      const DiscretizeOptions& opts) {
    if (!(std::isfinite(eta) && eta >= 0.0)) throw InvalidParams("discretize: eta must be >= 0");
    if (!(std::isfinite(delta) && delta > 0.0)) throw InvalidParams("discretize: delta must be > 0");
    const double kd = k_delta_value(kernel, delta);
    if (kd >= 1.0)
        throw DiscretizationSupercritical("discretize: K^(Delta) >= 1, grid too coarse for this kernel");

    std::size_t n_coeffs = 0;
    if (opts.trunc_horizon) {
        const double horizon = *opts.trunc_horizon;
        if (!(std::isfinite(horizon) && horizon >= 0.0))
            throw InvalidParams("discretize: trunc_horizon must be >= 0");
        const double limit = std::min(horizon, kernel.support_end()) * (1.0 + kEdgeTol) / delta;
        if (limit > static_cast<double>(opts.max_coeffs))
            throw TailTooHeavy("discretize: truncation horizon needs more coefficients than the cap allows");
        n_coeffs = static_cast<std::size_t>(std::max(0.0, std::floor(limit)));
    } else if (kd > 0.0) {
        if (const auto* e = std::get_if<ExponentialKernel>(&kernel.family())) {
            // grid_tail(m) = K^(Delta) * exp(-decay*Delta*m): solve for the
            // relative tolerance directly.
            const double need = std::log(1.0 / opts.tail_rel_tol) / (e->decay * delta);
            if (need > static_cast<double>(opts.max_coeffs))
                throw TailTooHeavy("discretize: tail tolerance needs more coefficients than the cap allows");
            n_coeffs = static_cast<std::size_t>(std::ceil(need));
        } else {
            const double limit = kernel.support_end() * (1.0 + kEdgeTol) / delta;
            if (limit > static_cast<double>(opts.max_coeffs))
                throw TailTooHeavy("discretize: kernel support needs more coefficients than the cap allows");
            n_coeffs = static_cast<std::size_t>(std::floor(limit));
        }
    }

    std::vector<double> alphas(n_coeffs);
    for (std::size_t k = 1; k <= n_coeffs; ++k)
        alphas[k - 1] = delta * kernel(static_cast<double>(k) * delta);
    const double tail = grid_tail(kernel, delta, n_coeffs);
    return InarParams(delta * eta, std::move(alphas), tail);
}

}  // namespace ppsim
