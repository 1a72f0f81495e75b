#include "ppsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ppsim/errors.hpp"

namespace ppsim::stats {

MeanSe mean_se(const std::vector<double>& xs) {
    if (xs.empty()) throw EmptySamples("mean_se: empty sample");
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0, 1};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(xs.size())), xs.size()};
}

MeanSe batch_means_se(const std::vector<double>& xs, std::size_t n_batches) {
    if (xs.empty()) throw EmptySamples("batch_means_se: empty sample");
    n_batches = std::max<std::size_t>(2, std::min(n_batches, xs.size()));
    const std::size_t len = xs.size() / n_batches;
    if (len == 0) return mean_se(xs);
    std::vector<double> means(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = b * len; i < (b + 1) * len; ++i) s += xs[i];
        means[b] = s / static_cast<double>(len);
    }
    return mean_se(means);
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw EmptySamples("sample_variance: need at least two values");
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

double w1_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptySamples("w1_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double w = 0.0;
    double last = std::min(a.front(), b.front());
    while (i < a.size() || j < b.size()) {
        double v;
        if (i < a.size() && (j == b.size() || a[i] <= b[j]))
            v = a[i];
        else
            v = b[j];
        w += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (v - last);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        last = v;
    }
    return w;
}

double w1_bootstrap_se(const std::vector<double>& a, const std::vector<double>& b,
                       std::size_t n_boot, RngStream& rng) {
    if (a.empty() || b.empty()) throw EmptySamples("w1_bootstrap_se: empty sample");
    std::vector<double> reps(n_boot, 0.0);
    std::vector<double> ra(a.size()), rb(b.size());
    for (std::size_t t = 0; t < n_boot; ++t) {
        for (auto& x : ra) x = a[static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.size()))];
        for (auto& x : rb) x = b[static_cast<std::size_t>(rng.uniform() * static_cast<double>(b.size()))];
        reps[t] = w1_distance(ra, rb);
    }
    if (n_boot < 2) return 0.0;
    return std::sqrt(sample_variance(reps));
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptySamples("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (i < a.size() && (j == b.size() || a[i] <= b[j]))
            v = a[i];
        else
            v = b[j];
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * static_cast<double>(m) /
                      (static_cast<double>(n) + static_cast<double>(m));
    const double sq = std::sqrt(ne);
    const double lambda = (sq + 0.12 + 0.11 / sq) * d;
    double p = 0.0;
    for (int j = 1; j <= 101; ++j) {
        const double term = 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * lambda * lambda * static_cast<double>(j) * static_cast<double>(j));
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw InvalidParams("gamma_q: need a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
    return gamma_q(dof / 2.0, x / 2.0);
}

double chi2_two_sample_pvalue(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                              double min_pooled) {
    if (a.empty() || b.empty()) throw EmptySamples("chi2_two_sample_pvalue: empty sample");
    std::map<std::int64_t, std::pair<double, double>> hist;
    for (auto v : a) hist[v].first += 1.0;
    for (auto v : b) hist[v].second += 1.0;
    // Pool adjacent values until each cell carries enough mass.
    std::vector<std::pair<double, double>> cells;
    double ca = 0.0, cb = 0.0;
    for (const auto& [v, cnt] : hist) {
        ca += cnt.first;
        cb += cnt.second;
        if (ca + cb >= min_pooled) {
            cells.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (cells.empty())
            cells.emplace_back(ca, cb);
        else {
            cells.back().first += ca;
            cells.back().second += cb;
        }
    }
    if (cells.size() < 2) return 1.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double total = na + nb;
    double stat = 0.0;
    for (const auto& [oa, ob] : cells) {
        const double pooled = (oa + ob) / total;
        const double ea = na * pooled;
        const double eb = nb * pooled;
        stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    return chi2_sf(stat, static_cast<double>(cells.size() - 1));
}

double chi2_gof_pvalue(const std::vector<std::int64_t>& samples,
                       const std::function<double(std::int64_t)>& pmf, double min_expected) {
    if (samples.empty()) throw EmptySamples("chi2_gof_pvalue: empty sample");
    const double n = static_cast<double>(samples.size());
    const std::int64_t lo = *std::min_element(samples.begin(), samples.end());
    const std::int64_t hi = *std::max_element(samples.begin(), samples.end());
    std::map<std::int64_t, double> hist;
    for (auto v : samples) hist[v] += 1.0;

    // Observed/expected cells over [lo, hi], plus the two unbounded tails
    // folded into the edge cells; pool cells from the right until every
    // expected count clears the threshold.
    std::vector<std::pair<double, double>> cells;  // (observed, expected)
    double head_prob = 0.0;
    for (std::int64_t v = 0; v < lo; ++v) head_prob += pmf(v);
    double cum_prob = 0.0;
    for (std::int64_t v = lo; v <= hi; ++v) {
        double prob = pmf(v);
        if (v == lo) prob += head_prob;
        cum_prob += prob;
        const auto it = hist.find(v);
        cells.emplace_back(it == hist.end() ? 0.0 : it->second, n * prob);
    }
    cells.back().second += n * std::max(0.0, 1.0 - head_prob - cum_prob);
    // Merge small expected cells into their left neighbour, scanning right to left.
    for (std::size_t i = cells.size(); i-- > 1;) {
        if (cells[i].second < min_expected) {
            cells[i - 1].first += cells[i].first;
            cells[i - 1].second += cells[i].second;
            cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    while (cells.size() > 1 && cells.front().second < min_expected) {
        cells[1].first += cells[0].first;
        cells[1].second += cells[0].second;
        cells.erase(cells.begin());
    }
    if (cells.size() < 2) return 1.0;
    double stat = 0.0;
    for (const auto& [obs, exp] : cells) stat += (obs - exp) * (obs - exp) / exp;
    return chi2_sf(stat, static_cast<double>(cells.size() - 1));
}

}  // namespace ppsim::stats
