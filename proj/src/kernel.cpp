#include "ppsim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppsim/errors.hpp"

namespace ppsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when deciding whether a grid point sits on the support
// boundary, so that k*Delta == width survives floating-point round-off.
constexpr double kEdgeTol = 1e-12;

bool finite_nonneg(double x) {
    return std::isfinite(x) && x >= 0.0;
}

// Augmented node list of a table kernel: (0,0) followed by the knots.
struct TableNodes {
    const std::vector<std::pair<double, double>>& knots;
    std::size_t size() const { return knots.size() + 1; }
    double t(std::size_t i) const { return i == 0 ? 0.0 : knots[i - 1].first; }
    double h(std::size_t i) const { return i == 0 ? 0.0 : knots[i - 1].second; }
};

}  // namespace

ReproductionKernel::ReproductionKernel(Family family) : family_(std::move(family)) {
    if (const auto* e = std::get_if<ExponentialKernel>(&family_)) {
        if (!finite_nonneg(e->scale)) throw InvalidParams("exponential kernel: scale must be >= 0");
        if (!(std::isfinite(e->decay) && e->decay > 0.0))
            throw InvalidParams("exponential kernel: decay must be > 0");
    } else if (const auto* s = std::get_if<StepKernel>(&family_)) {
        if (!finite_nonneg(s->height)) throw InvalidParams("step kernel: height must be >= 0");
        if (!(std::isfinite(s->width) && s->width > 0.0))
            throw InvalidParams("step kernel: width must be > 0");
    } else {
        const auto& knots = std::get<TableKernel>(family_).knots;
        double prev = 0.0;
        for (const auto& [t, h] : knots) {
            if (!(std::isfinite(t) && t > prev))
                throw InvalidParams("table kernel: knot times must be finite, positive, strictly increasing");
            if (!finite_nonneg(h)) throw InvalidParams("table kernel: knot values must be >= 0");
            prev = t;
        }
        TableNodes nodes{knots};
        table_cum_.assign(nodes.size(), 0.0);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            table_cum_[i] = table_cum_[i - 1] +
                            0.5 * (nodes.h(i - 1) + nodes.h(i)) * (nodes.t(i) - nodes.t(i - 1));
        }
    }
}

ReproductionKernel ReproductionKernel::exponential(double scale, double decay) {
    return ReproductionKernel(ExponentialKernel{scale, decay});
}

ReproductionKernel ReproductionKernel::step(double height, double width) {
    return ReproductionKernel(StepKernel{height, width});
}

ReproductionKernel ReproductionKernel::table(std::vector<std::pair<double, double>> knots) {
    return ReproductionKernel(TableKernel{std::move(knots)});
}

double ReproductionKernel::operator()(double t) const {
    if (!(t > 0.0)) return 0.0;
    if (const auto* e = std::get_if<ExponentialKernel>(&family_)) {
        return e->scale == 0.0 ? 0.0 : e->scale * std::exp(-e->decay * t);
    }
    if (const auto* s = std::get_if<StepKernel>(&family_)) {
        return t <= s->width * (1.0 + kEdgeTol) ? s->height : 0.0;
    }
    const auto& knots = std::get<TableKernel>(family_).knots;
    if (knots.empty()) return 0.0;
    const double end = knots.back().first;
    if (t > end) {
        if (t > end * (1.0 + kEdgeTol)) return 0.0;
        return knots.back().second;
    }
    TableNodes nodes{knots};
    // First node with t(i) >= t; segment [i-1, i].
    std::size_t lo = 0, hi = nodes.size() - 1;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (nodes.t(mid) < t)
            lo = mid;
        else
            hi = mid;
    }
    const double t0 = nodes.t(lo), t1 = nodes.t(hi);
    const double h0 = nodes.h(lo), h1 = nodes.h(hi);
    const double w = (t - t0) / (t1 - t0);
    return h0 + w * (h1 - h0);
}

double ReproductionKernel::mass() const {
    if (const auto* e = std::get_if<ExponentialKernel>(&family_)) return e->scale / e->decay;
    if (const auto* s = std::get_if<StepKernel>(&family_)) return s->height * s->width;
    return table_cum_.empty() ? 0.0 : table_cum_.back();
}

double ReproductionKernel::tail_mass(double t) const {
    if (t <= 0.0) return mass();
    if (const auto* e = std::get_if<ExponentialKernel>(&family_))
        return e->scale / e->decay * std::exp(-e->decay * t);
    if (const auto* s = std::get_if<StepKernel>(&family_))
        return s->height * std::max(0.0, s->width - t);
    const auto& knots = std::get<TableKernel>(family_).knots;
    if (knots.empty() || t >= knots.back().first) return 0.0;
    TableNodes nodes{knots};
    std::size_t i = 1;
    while (nodes.t(i) <= t) ++i;
    // Partial trapezoid from t to nodes.t(i), then full segments.
    const double ht = (*this)(t);
    double tail = 0.5 * (ht + nodes.h(i)) * (nodes.t(i) - t);
    tail += table_cum_.back() - table_cum_[i];
    return tail;
}

double ReproductionKernel::support_end() const {
    if (std::holds_alternative<ExponentialKernel>(family_)) return kInf;
    if (const auto* s = std::get_if<StepKernel>(&family_)) return s->width;
    const auto& knots = std::get<TableKernel>(family_).knots;
    return knots.empty() ? 0.0 : knots.back().first;
}

double ReproductionKernel::sup_after(double t) const {
    if (const auto* e = std::get_if<ExponentialKernel>(&family_))
        return e->scale * std::exp(-e->decay * std::max(t, 0.0));
    if (const auto* s = std::get_if<StepKernel>(&family_))
        return t < s->width ? s->height : 0.0;
    const auto& knots = std::get<TableKernel>(family_).knots;
    if (knots.empty() || t >= knots.back().first) return 0.0;
    double best = t > 0.0 ? (*this)(t) : 0.0;
    for (const auto& [tk, hk] : knots)
        if (tk > t) best = std::max(best, hk);
    return best;
}

std::vector<double> ReproductionKernel::discontinuities() const {
    if (const auto* e = std::get_if<ExponentialKernel>(&family_)) {
        if (e->scale > 0.0) return {0.0};
        return {};
    }
    if (const auto* s = std::get_if<StepKernel>(&family_)) {
        if (s->height > 0.0) return {0.0, s->width};
        return {};
    }
    const auto& knots = std::get<TableKernel>(family_).knots;
    if (!knots.empty() && knots.back().second > 0.0) return {knots.back().first};
    return {};
}

double ReproductionKernel::sample_displacement(RngStream& rng) const {
    const double total = mass();
    if (!(total > 0.0))
        throw InvalidParams("sample_displacement: kernel has zero mass");
    if (const auto* e = std::get_if<ExponentialKernel>(&family_))
        return rng.exponential(e->decay);
    if (const auto* s = std::get_if<StepKernel>(&family_))
        return s->width * (1.0 - rng.uniform());
    const auto& knots = std::get<TableKernel>(family_).knots;
    TableNodes nodes{knots};
    const double target = rng.uniform() * total;
    std::size_t i = 1;
    while (i + 1 < nodes.size() && table_cum_[i] <= target) ++i;
    const double a = target - table_cum_[i - 1];
    const double t0 = nodes.t(i - 1), t1 = nodes.t(i);
    const double h0 = nodes.h(i - 1), h1 = nodes.h(i);
    const double len = t1 - t0;
    const double slope = (h1 - h0) / len;
    double d;
    if (std::abs(slope) * len < 1e-12 * std::max(h0, h1)) {
        d = h0 > 0.0 ? a / h0 : 0.0;
    } else {
        // Solve h0*d + slope*d^2/2 = a on [0, len].
        const double disc = std::max(0.0, h0 * h0 + 2.0 * slope * a);
        d = (std::sqrt(disc) - h0) / slope;
    }
    return t0 + std::clamp(d, 0.0, len);
}

}  // namespace ppsim
