#include "ppsim/approx.hpp"

#include <cmath>

#include "ppsim/errors.hpp"
#include "ppsim/inar.hpp"
#include "ppsim/parallel.hpp"
#include "ppsim/stats.hpp"

namespace ppsim::approx {

InarParams build_inar(const hawkes::Model& model, double delta, const DiscretizeOptions& opts) {
    return discretize(model.eta(), model.kernel(), delta, opts);
}

double count_distribution_distance(const std::vector<double>& a, const std::vector<double>& b) {
    return stats::w1_distance(a, b);
}

ConvergenceReport convergence_sweep(const hawkes::Model& model, const std::vector<double>& deltas,
                                    Window window, std::size_t reps, RngStream& rng,
                                    const SweepOptions& opts) {
    if (reps == 0) throw InvalidParams("convergence_sweep: reps must be > 0");
    if (!(window.length() >= 2.0 - 1e-9))
        throw InvalidParams("convergence_sweep: window must cover two unit test windows");
    const Window test1{window.a, window.a + 1.0};
    const Window test2{window.a + 1.0, window.a + 2.0};
    const double target_rate = model.eta() / (1.0 - model.kernel().mass());
    const double hawkes_lookback = hawkes::default_lookback(model);

    ConvergenceReport report;
    report.target_rate = target_rate;

    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const double delta = deltas[di];
        const double bins_per_unit = 1.0 / delta;
        if (std::abs(bins_per_unit - std::round(bins_per_unit)) > 1e-9)
            throw MisalignedWindow("convergence_sweep: 1/delta must be an integer bin count");
        const auto m = static_cast<std::size_t>(std::llround(bins_per_unit));

        const InarParams params = build_inar(model, delta);
        const std::size_t burn_in = inar::default_burn_in(params);

        std::vector<double> h1(reps), h2(reps), i1(reps), i2(reps);
        const std::uint64_t base = static_cast<std::uint64_t>(di) * 2 * reps;
        parallel_for(reps, [&](std::size_t r) {
            RngStream hr = rng.substream(base + r);
            const auto cl = hawkes::simulate_cluster(model, window, hawkes_lookback, hr);
            double c1 = 0.0, c2 = 0.0;
            for (double t : cl.pattern.times) {
                if (test1.contains(t)) ++c1;
                if (test2.contains(t)) ++c2;
            }
            h1[r] = c1;
            h2[r] = c2;

            RngStream ir = rng.substream(base + reps + r);
            const auto series = inar::simulate(params, 2 * m, burn_in, ir);
            std::int64_t s1 = 0, s2 = 0;
            for (std::size_t idx = 0; idx < m; ++idx) s1 += series.counts[idx];
            for (std::size_t idx = m; idx < 2 * m; ++idx) s2 += series.counts[idx];
            i1[r] = static_cast<double>(s1);
            i2[r] = static_cast<double>(s2);
        }, opts.threads);

        ConvergenceRow row;
        row.delta = delta;
        row.k_delta = params.reproduction_mean();
        row.mean_gap = std::abs(model.eta() / (1.0 - row.k_delta) - target_rate);
        row.w1_window1 = stats::w1_distance(h1, i1);
        row.w1_window2 = stats::w1_distance(h2, i2);
        RngStream boot = rng.substream(0x42000000ULL + di);
        row.w1_window1_se = stats::w1_bootstrap_se(h1, i1, opts.w1_bootstrap, boot);
        row.w1_window2_se = stats::w1_bootstrap_se(h2, i2, opts.w1_bootstrap, boot);
        row.var_gap = std::abs(stats::sample_variance(i1) - stats::sample_variance(h1));
        row.reps = reps;
        report.rows.push_back(row);
    }
    return report;
}

double yule_walker_residual(const InarParams& params, std::size_t max_lag, double tol) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    const auto r = inar::autocovariance(params, max_lag + p, tol);
    double worst = 0.0;
    for (std::size_t n = 1; n <= max_lag; ++n) {
        double rhs = 0.0;
        for (std::size_t k = 1; k <= p; ++k) {
            const auto lag = static_cast<std::size_t>(
                std::abs(static_cast<std::int64_t>(n) - static_cast<std::int64_t>(k)));
            rhs += alphas[k - 1] * r[lag];
        }
        worst = std::max(worst, std::abs(r[n] - rhs));
    }
    return worst;
}

double variance_identity_residual(const InarParams& params, double eta, double delta, double tol) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    const auto r = inar::autocovariance(params, p, tol);
    const double d2 = delta * delta;
    const double lhs = r[0] / d2;
    double rhs = eta / (delta * (1.0 - params.alpha_sum()));
    for (std::size_t k = 1; k <= p; ++k) rhs += alphas[k - 1] * r[k] / d2;
    return std::abs(lhs - rhs);
}

}  // namespace ppsim::approx
