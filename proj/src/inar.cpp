#include "ppsim/inar.hpp"

#include <algorithm>
#include <cmath>

#include "ppsim/errors.hpp"

namespace ppsim::inar {

namespace {

void check_nonneg_count(std::int64_t y, const char* what) {
    if (y < 0) throw InvalidParams(std::string(what) + ": count must be >= 0");
}

}  // namespace

std::int64_t thin(double alpha, std::int64_t y, RngStream& rng) {
    if (!(std::isfinite(alpha) && alpha >= 0.0)) throw InvalidParams("thin: alpha must be >= 0");
    check_nonneg_count(y, "thin");
    if (y == 0 || alpha == 0.0) return 0;
    return rng.poisson(alpha * static_cast<double>(y));
}

std::int64_t thin_bernoulli(double alpha, std::int64_t y, RngStream& rng) {
    if (!(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0))
        throw InvalidProbability("thin_bernoulli: alpha must be in [0, 1]");
    check_nonneg_count(y, "thin_bernoulli");
    return rng.binomial(y, alpha);
}

CountingPmfRatio counting_pmf_ratio(double alpha, double delta, std::int64_t n) {
    if (!(std::isfinite(alpha) && alpha >= 0.0) || !(std::isfinite(delta) && delta >= 0.0))
        throw InvalidParams("counting_pmf_ratio: alpha and delta must be >= 0");
    if (n < 0) throw InvalidParams("counting_pmf_ratio: n must be >= 0");
    const double x = delta * alpha;
    if (x > 1.0) throw InvalidProbability("counting_pmf_ratio: delta*alpha must be <= 1");
    if (n == 0) return {std::exp(-x) / (1.0 - x), true};
    if (n == 1) return {std::exp(-x), true};
    if (x == 0.0) return {0.0, false};
    return {std::exp(-x + static_cast<double>(n) * std::log(x) - std::lgamma(static_cast<double>(n) + 1.0)),
            false};
}

std::size_t default_burn_in(const InarParams& params) {
    const double scaled = 50.0 / (1.0 - params.reproduction_mean());
    return static_cast<std::size_t>(std::max(1000.0, std::ceil(scaled)));
}

CountSeries simulate(const InarParams& params, std::size_t n_steps, std::size_t burn_in,
                     RngStream& rng) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    const std::size_t total = burn_in + n_steps;
    // rates[n % (p+1)] accumulates sum_k alpha_k X_{n-k} pushed by past values.
    std::vector<double> rates(p + 1, 0.0);
    std::vector<std::int64_t> out(n_steps, 0);
    for (std::size_t step = 0; step < total; ++step) {
        const std::size_t slot = step % (p + 1);
        const double lambda = params.alpha0() + rates[slot];
        rates[slot] = 0.0;
        const std::int64_t x = rng.poisson(lambda);
        if (x > 0) {
            const double xd = static_cast<double>(x);
            for (std::size_t k = 1; k <= p; ++k)
                if (alphas[k - 1] > 0.0) rates[(step + k) % (p + 1)] += alphas[k - 1] * xd;
        }
        if (step >= burn_in) out[step - burn_in] = x;
    }
    return CountSeries{1.0, 0, std::move(out)};
}

FamilyRealization simulate_family(const InarParams& params, std::size_t horizon, RngStream& rng) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    FamilyRealization out;
    out.horizon = horizon;

    std::vector<std::int64_t> cur(horizon + 1, 0);
    cur[0] = 1;
    while (true) {
        out.per_generation.push_back(cur);
        std::vector<std::int64_t> next(horizon + 1, 0);
        bool alive = false;
        for (std::size_t n = 0; n <= horizon; ++n) {
            if (cur[n] == 0) continue;
            const double parents = static_cast<double>(cur[n]);
            const std::size_t k_max = std::min(p, horizon - n);
            for (std::size_t k = 1; k <= k_max; ++k) {
                if (alphas[k - 1] == 0.0) continue;
                const std::int64_t c = rng.poisson(alphas[k - 1] * parents);
                if (c > 0) {
                    next[n + k] += c;
                    alive = true;
                }
            }
        }
        if (!alive) break;
        cur = std::move(next);
    }

    out.family.assign(horizon + 1, 0);
    out.generation_sizes.assign(out.per_generation.size(), 0);
    for (std::size_t g = 0; g < out.per_generation.size(); ++g) {
        for (std::size_t n = 0; n <= horizon; ++n) {
            out.family[n] += out.per_generation[g][n];
            out.generation_sizes[g] += out.per_generation[g][n];
        }
        out.total_size += out.generation_sizes[g];
    }
    return out;
}

std::size_t default_lookback(const InarParams& params, double tol) {
    if (!(tol > 0.0)) throw InvalidParams("default_lookback: tol must be > 0");
    const double ke = params.alpha_sum();
    if (ke == 0.0) return 0;
    const double target = 1.0 / (1.0 - ke);
    const std::size_t p = params.order();
    std::vector<double> betas{1.0};
    double sum = 1.0;
    std::size_t k = 0;
    while (target - sum >= tol) {
        ++k;
        double b = 0.0;
        const std::size_t i_max = std::min(p, k);
        for (std::size_t i = 1; i <= i_max; ++i) b += params.alphas()[i - 1] * betas[k - i];
        betas.push_back(b);
        sum += b;
        if (k > 100000000) throw TailTooHeavy("default_lookback: beta tail decays too slowly");
    }
    return k;
}

namespace {

// Run one family cascade started at absolute step `start`, adding every
// individual landing inside [0, n_steps) to counts. Positions never decrease,
// so ancestors in the lookback region still seed descendants in the window.
void spawn_family_into(std::vector<std::int64_t>& counts, std::int64_t start,
                       const InarParams& params, RngStream& rng,
                       std::vector<std::pair<std::int64_t, std::int64_t>>& cur,
                       std::vector<std::pair<std::int64_t, std::int64_t>>& next) {
    const std::int64_t n = static_cast<std::int64_t>(counts.size());
    const auto& alphas = params.alphas();
    const std::int64_t p = static_cast<std::int64_t>(alphas.size());
    if (start >= 0 && start < n) ++counts[static_cast<std::size_t>(start)];
    cur.assign(1, {start, 1});
    while (!cur.empty()) {
        next.clear();
        for (const auto& [pos, cnt] : cur) {
            const std::int64_t k_max = std::min(p, n - 1 - pos);
            const double parents = static_cast<double>(cnt);
            for (std::int64_t k = 1; k <= k_max; ++k) {
                const double a = alphas[static_cast<std::size_t>(k - 1)];
                if (a == 0.0) continue;
                const std::int64_t c = rng.poisson(a * parents);
                if (c == 0) continue;
                const std::int64_t child = pos + k;
                if (child >= 0 && child < n) counts[static_cast<std::size_t>(child)] += c;
                next.emplace_back(child, c);
            }
        }
        std::swap(cur, next);
    }
}

}  // namespace

CountSeries simulate_branching(const InarParams& params, std::size_t n_steps, std::size_t lookback,
                               RngStream& rng) {
    std::vector<std::int64_t> counts(n_steps, 0);
    std::vector<std::pair<std::int64_t, std::int64_t>> cur, next;
    const std::int64_t first = -static_cast<std::int64_t>(lookback);
    for (std::int64_t i = first; i < static_cast<std::int64_t>(n_steps); ++i) {
        const std::int64_t immigrants = rng.poisson(params.alpha0());
        for (std::int64_t j = 0; j < immigrants; ++j)
            spawn_family_into(counts, i, params, rng, cur, next);
    }
    return CountSeries{1.0, 0, std::move(counts)};
}

std::vector<double> beta_coeffs(const InarParams& params, std::size_t n_max) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    std::vector<double> betas(n_max + 1, 0.0);
    betas[0] = 1.0;
    for (std::size_t k = 1; k <= n_max; ++k) {
        double b = 0.0;
        const std::size_t i_max = std::min(p, k);
        for (std::size_t i = 1; i <= i_max; ++i) b += alphas[i - 1] * betas[k - i];
        betas[k] = b;
    }
    return betas;
}

double mean(const InarParams& params) {
    return params.alpha0() / (1.0 - params.reproduction_mean());
}

std::vector<double> autocovariance(const InarParams& params, std::size_t max_lag, double tol) {
    if (!(tol > 0.0)) throw InvalidParams("autocovariance: tol must be > 0");
    const double ke = params.alpha_sum();
    const double prefactor = params.alpha0() / (1.0 - ke);
    std::vector<double> r(max_lag + 1, 0.0);
    if (ke == 0.0 || prefactor == 0.0) {
        r[0] = params.alpha0();
        return r;
    }
    // Grow the beta weights until the exact remainder of sum beta (available
    // in closed form) keeps every lag's truncation error below tol: the tail
    // sum_{k>m} beta_k beta_{k+j} is at most the remainder, since beta <= 1.
    const double target = 1.0 / (1.0 - ke);
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    std::vector<double> betas{1.0};
    double sum = 1.0;
    std::size_t m = 0;
    while (prefactor * (target - sum) >= tol) {
        ++m;
        double b = 0.0;
        const std::size_t i_max = std::min(p, m);
        for (std::size_t i = 1; i <= i_max; ++i) b += alphas[i - 1] * betas[m - i];
        betas.push_back(b);
        sum += b;
        if (m > 100000000) throw TailTooHeavy("autocovariance: beta tail decays too slowly");
    }
    const std::size_t k_max = m;
    betas.resize(k_max + max_lag + 1, 0.0);
    for (std::size_t k = k_max + 1; k <= k_max + max_lag; ++k) {
        double b = 0.0;
        const std::size_t i_max = std::min(p, k);
        for (std::size_t i = 1; i <= i_max; ++i) b += alphas[i - 1] * betas[k - i];
        betas[k] = b;
    }
    for (std::size_t j = 0; j <= max_lag; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= k_max; ++k) acc += betas[k] * betas[k + j];
        r[j] = prefactor * acc;
    }
    return r;
}

std::vector<double> residuals(const CountSeries& series, const InarParams& params) {
    const auto& alphas = params.alphas();
    const std::size_t p = alphas.size();
    const auto& counts = series.counts;
    if (counts.size() < p + 1)
        throw SeriesTooShort("residuals: series shorter than the reproduction window");
    std::vector<double> u(counts.size() - p);
    for (std::size_t i = p; i < counts.size(); ++i) {
        double acc = static_cast<double>(counts[i]) - params.alpha0();
        for (std::size_t k = 1; k <= p; ++k)
            acc -= alphas[k - 1] * static_cast<double>(counts[i - k]);
        u[i - p] = acc;
    }
    return u;
}

double mgf(const InarParams& params, const FiniteSupportSeq& t_seq, double tol) {
    if (!(tol > 0.0)) throw InvalidParams("mgf: tol must be > 0");
    for (double t : t_seq.values) {
        if (!std::isfinite(t)) throw InvalidParams("mgf: arguments must be finite");
        if (t > 0.0) throw UnsupportedArgument("mgf: arguments must be <= 0");
    }
    const std::int64_t d = t_seq.support();
    if (d < 0) return 1.0;
    if (params.alpha0() == 0.0) return 1.0;

    const auto& alphas = params.alphas();
    const std::int64_t p = static_cast<std::int64_t>(alphas.size());
    const double ke = params.alpha_sum();

    // M(j) is the family MGF of the argument sequence shifted by offset j;
    // M(j) = 1 beyond the support, and each value only depends on offsets
    // j+1..j+p, so one downward sweep evaluates everything exactly.
    std::vector<double> mvals;  // mvals[d - j] = M(j)
    auto m_at = [&](std::int64_t j) -> double {
        return j > d ? 1.0 : mvals[static_cast<std::size_t>(d - j)];
    };

    double shifted_sum = 0.0;  // sum_j (M(j) - 1)
    const double sum_tol = tol / std::max(params.alpha0(), 1e-12);
    const std::size_t block = std::max<std::size_t>(static_cast<std::size_t>(p), 1);
    double block_max = 0.0;
    std::size_t in_block = 0;
    for (std::int64_t j = d;; --j) {
        double expo = (j >= 0) ? t_seq.values[static_cast<std::size_t>(j)] : 0.0;
        const std::int64_t k_lim = std::min<std::int64_t>(p, d - j);
        for (std::int64_t k = 1; k <= k_lim; ++k) {
            const double a = alphas[static_cast<std::size_t>(k - 1)];
            if (a > 0.0) expo += a * (m_at(j + k) - 1.0);
        }
        const double mj = std::exp(expo);
        mvals.push_back(mj);
        shifted_sum += mj - 1.0;
        if (j < 0) {
            if (p == 0) break;
            block_max = std::max(block_max, 1.0 - mj);
            if (++in_block >= block) {
                // Below a block where 1-M is uniformly small, block maxima
                // shrink by a factor K, so the remaining contribution is
                // bounded by a geometric series.
                const double tail = static_cast<double>(block) * block_max * ke / (1.0 - ke);
                if (tail < sum_tol) break;
                block_max = 0.0;
                in_block = 0;
            }
        }
    }
    return std::exp(params.alpha0() * shifted_sum);
}

InarParams truncate(const InarParams& params, std::size_t p) {
    const auto& alphas = params.alphas();
    std::vector<double> kept(alphas.begin(),
                             alphas.begin() + static_cast<std::ptrdiff_t>(std::min(p, alphas.size())));
    return InarParams(params.alpha0(), std::move(kept), 0.0);
}

}  // namespace ppsim::inar
