#include "ppsim/hawkes.hpp"

#include <algorithm>
#include <cmath>

#include "ppsim/errors.hpp"
#include "ppsim/stats.hpp"

namespace ppsim::hawkes {

Model::Model(double eta, ReproductionKernel kernel) : eta_(eta), kernel_(std::move(kernel)) {
    if (!(std::isfinite(eta_) && eta_ > 0.0)) throw InvalidParams("hawkes model: eta must be > 0");
    if (!(kernel_.mass() < 1.0))
        throw MassNotSubcritical("hawkes model: kernel mass must be < 1");
}

double default_lookback(const Model& model, double expected_missed) {
    if (!(expected_missed > 0.0))
        throw InvalidParams("default_lookback: expected_missed must be > 0");
    const double k = model.kernel().mass();
    if (k == 0.0) return 0.0;
    // Events before the window arrive at rate eta/(1-K); one ignited at lag L
    // feeds at most tail_mass(L)/(1-K) expected descendants into the window.
    const double target = expected_missed * (1.0 - k) * (1.0 - k) / model.eta();
    if (model.kernel().tail_mass(0.0) <= target) return 0.0;
    if (const auto* e = std::get_if<ExponentialKernel>(&model.kernel().family()))
        return std::log(k / target) / e->decay;
    double lo = 0.0, hi = model.kernel().support_end();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (model.kernel().tail_mass(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

ClusterRealization simulate_cluster(const Model& model, Window window, double lookback,
                                    RngStream& rng) {
    if (!(window.b > window.a)) throw InvalidParams("simulate_cluster: window must satisfy a < b");
    if (!(lookback >= 0.0)) throw InvalidParams("simulate_cluster: lookback must be >= 0");

    struct Ev {
        double t;
        std::int64_t parent;  // index into `all`, -1 for immigrants
        std::int64_t gen;
    };
    std::vector<Ev> all;

    const double t0 = window.a - lookback;
    const double span = window.b - t0;
    const std::int64_t n_imm = rng.poisson(model.eta() * span);
    all.reserve(static_cast<std::size_t>(n_imm));
    for (std::int64_t i = 0; i < n_imm; ++i)
        all.push_back({t0 + span * rng.uniform(), -1, 0});

    const double k = model.kernel().mass();
    if (k > 0.0) {
        for (std::size_t i = 0; i < all.size(); ++i) {
            const Ev parent = all[i];
            const std::int64_t children = rng.poisson(k);
            for (std::int64_t c = 0; c < children; ++c) {
                const double t = parent.t + model.kernel().sample_displacement(rng);
                if (t <= window.b)
                    all.push_back({t, static_cast<std::int64_t>(i), parent.gen + 1});
            }
        }
    }

    // Retain the window, sort by time (ties broken by creation order), and
    // remap parent indices onto the retained set.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (window.contains(all[i].t)) keep.push_back(i);
    std::sort(keep.begin(), keep.end(), [&](std::size_t x, std::size_t y) {
        return all[x].t != all[y].t ? all[x].t < all[y].t : x < y;
    });
    std::vector<std::int64_t> window_pos(all.size(), -1);
    for (std::size_t r = 0; r < keep.size(); ++r)
        window_pos[keep[r]] = static_cast<std::int64_t>(r);

    ClusterRealization out;
    out.pattern.window = window;
    out.pattern.times.reserve(keep.size());
    out.parent_index.reserve(keep.size());
    out.generation.reserve(keep.size());
    for (std::size_t idx : keep) {
        const Ev& ev = all[idx];
        out.pattern.times.push_back(ev.t);
        out.generation.push_back(ev.gen);
        if (ev.parent < 0)
            out.parent_index.push_back(-1);
        else {
            const std::int64_t pos = window_pos[static_cast<std::size_t>(ev.parent)];
            out.parent_index.push_back(pos >= 0 ? pos : -2);
        }
    }
    return out;
}

PointPattern simulate_thinning(const Model& model, Window window, double lookback, RngStream& rng) {
    if (!(window.b > window.a)) throw InvalidParams("simulate_thinning: window must satisfy a < b");
    if (!(lookback >= 0.0)) throw InvalidParams("simulate_thinning: lookback must be >= 0");

    std::vector<double> events;
    double t = window.a - lookback;

    if (const auto* e = std::get_if<ExponentialKernel>(&model.kernel().family())) {
        // The excitation sum decays deterministically between events, so the
        // running value is both the exact intensity offset and a valid
        // dominating bound.
        double excitation = 0.0;
        for (;;) {
            const double bound = model.eta() + excitation;
            const double next = t + rng.exponential(bound);
            if (next > window.b) break;
            excitation *= std::exp(-e->decay * (next - t));
            const double lambda = model.eta() + excitation;
            if (rng.uniform() * bound <= lambda) {
                events.push_back(next);
                excitation += e->scale;
            }
            t = next;
        }
    } else {
        const double support = model.kernel().support_end();
        std::size_t lo = 0;  // events before t - support are spent exactly
        for (;;) {
            while (lo < events.size() && t - events[lo] >= support) ++lo;
            double bound = model.eta();
            for (std::size_t i = lo; i < events.size(); ++i)
                bound += model.kernel().sup_after(t - events[i]);
            const double next = t + rng.exponential(bound);
            if (next > window.b) break;
            double lambda = model.eta();
            for (std::size_t i = lo; i < events.size(); ++i)
                lambda += model.kernel()(next - events[i]);
            if (rng.uniform() * bound <= lambda) events.push_back(next);
            t = next;
        }
    }

    PointPattern out;
    out.window = window;
    for (double s : events)
        if (window.contains(s)) out.times.push_back(s);
    return out;
}

double intensity(const Model& model, const PointPattern& pattern, double t) {
    double lambda = model.eta();
    for (double s : pattern.times) {
        if (s >= t) break;
        lambda += model.kernel()(t - s);
    }
    return lambda;
}

namespace {

bool grid_aligned(double x, double delta) {
    const double r = x / delta;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

}  // namespace

CountSeries bin_counts(const PointPattern& pattern, double delta, Window window) {
    if (!(std::isfinite(delta) && delta > 0.0)) throw InvalidParams("bin_counts: delta must be > 0");
    if (!(window.b > window.a)) throw InvalidParams("bin_counts: window must satisfy a < b");
    if (!grid_aligned(window.a, delta) || !grid_aligned(window.b, delta))
        throw MisalignedWindow("bin_counts: window endpoints must sit on the delta grid");
    const std::int64_t n_bins = static_cast<std::int64_t>(std::llround((window.b - window.a) / delta));
    CountSeries out;
    out.delta = delta;
    out.start_index = static_cast<std::int64_t>(std::llround(window.a / delta)) + 1;
    out.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double t : pattern.times) {
        if (!window.contains(t)) continue;
        const double r = (t - window.a) / delta;
        auto idx = static_cast<std::int64_t>(std::ceil(r - 1e-12)) - 1;
        idx = std::clamp<std::int64_t>(idx, 0, n_bins - 1);
        ++out.counts[static_cast<std::size_t>(idx)];
    }
    return out;
}

double GridStepFn::operator()(double t) const {
    if (heights.empty()) return 0.0;
    const double r = (t - origin) / delta;
    const auto idx = static_cast<std::int64_t>(std::ceil(r - 1e-12)) - 1;
    if (idx < 0 || idx >= static_cast<std::int64_t>(heights.size())) return 0.0;
    return heights[static_cast<std::size_t>(idx)];
}

LaplaceEstimate laplace_mc(const std::vector<PointPattern>& patterns, const GridStepFn& f,
                           Window window) {
    if (patterns.empty()) throw EmptySamples("laplace_mc: no patterns");
    for (double h : f.heights)
        if (!(h >= 0.0)) throw InvalidParams("laplace_mc: f must be nonnegative");
    std::vector<double> vals;
    vals.reserve(patterns.size());
    for (const auto& pattern : patterns) {
        double s = 0.0;
        for (double t : pattern.times)
            if (window.contains(t)) s += f(t);
        vals.push_back(std::exp(-s));
    }
    const auto ms = stats::mean_se(vals);
    return {ms.mean, ms.se};
}

}  // namespace ppsim::hawkes
