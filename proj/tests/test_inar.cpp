#include <doctest.h>

#include <cmath>

#include "ppsim/discretize.hpp"
#include "ppsim/errors.hpp"
#include "ppsim/inar.hpp"
#include "ppsim/stats.hpp"
#include "test_util.hpp"

using namespace ppsim;

namespace {

const InarParams kGeoHalf(1.0, {0.5});  // alpha0 = 1, alpha_1 = 0.5, K = 1/2

InarParams exp_discretized() {
    return discretize(1.0, ReproductionKernel::exponential(1.0, 1.0), 0.1);
}

}  // namespace

TEST_CASE("thin: empty sum convention and moments") {
    RngStream rng(11);
    for (int i = 0; i < 100; ++i) CHECK(inar::thin(0.3, 0, rng) == 0);
    CHECK(inar::thin(0.0, 9, rng) == 0);

    std::vector<double> xs(100000);
    for (auto& x : xs) x = static_cast<double>(inar::thin(0.5, 4, rng));
    const auto ms = stats::mean_se(xs);
    CHECK(std::abs(ms.mean - 2.0) < 3.0 * ms.se);
    // Poisson thinning: variance alpha*y as well.
    const double var = stats::sample_variance(xs);
    CHECK(std::abs(var - 2.0) < 4.0 * std::sqrt(2.0 * 2.0 * 2.0 / 100000.0) + 0.05);
}

TEST_CASE("thin: law is Poisson(alpha*y)") {
    RngStream rng(12);
    std::vector<std::int64_t> xs(100000);
    for (auto& x : xs) x = inar::thin(0.5, 4, rng);
    const double p = stats::chi2_gof_pvalue(xs, [](std::int64_t k) {
        return std::exp(-2.0 + static_cast<double>(k) * std::log(2.0) -
                        std::lgamma(static_cast<double>(k) + 1.0));
    });
    CHECK(p > 0.01);
}

TEST_CASE("thin_bernoulli: edge cases and binomial law") {
    RngStream rng(13);
    CHECK(inar::thin_bernoulli(0.3, 0, rng) == 0);
    for (int i = 0; i < 50; ++i) CHECK(inar::thin_bernoulli(1.0, 7, rng) == 7);
    CHECK_THROWS_AS(inar::thin_bernoulli(1.2, 3, rng), InvalidProbability);

    std::vector<std::int64_t> xs(100000);
    for (auto& x : xs) x = inar::thin_bernoulli(0.5, 4, rng);
    const double p = stats::chi2_gof_pvalue(xs, [](std::int64_t k) {
        if (k < 0 || k > 4) return 0.0;
        static const double pmf[] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
        return pmf[k];
    });
    CHECK(p > 0.01);
}

TEST_CASE("counting_pmf_ratio: closed forms") {
    const auto r0 = inar::counting_pmf_ratio(1.0, 0.01, 0);
    CHECK(r0.bernoulli_supported);
    CHECK(r0.value == doctest::Approx(std::exp(-0.01) / 0.99).epsilon(1e-12));
    CHECK(r0.value == doctest::Approx(1.000050).epsilon(1e-6));

    const auto r1 = inar::counting_pmf_ratio(1.0, 0.01, 1);
    CHECK(r1.bernoulli_supported);
    CHECK(r1.value == doctest::Approx(std::exp(-0.01)).epsilon(1e-12));
    CHECK(r1.value == doctest::Approx(0.990050).epsilon(1e-6));

    const auto rz = inar::counting_pmf_ratio(0.0, 0.5, 0);
    CHECK(rz.value == 1.0);

    const auto r2 = inar::counting_pmf_ratio(1.0, 0.01, 2);
    CHECK_FALSE(r2.bernoulli_supported);
    CHECK(r2.value == doctest::Approx(std::exp(-0.01) * 0.01 * 0.01 / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(static_cast<void>(inar::counting_pmf_ratio(3.0, 0.5, 0)),
                    InvalidProbability);
}

TEST_CASE("simulate: no feedback gives iid Poisson(alpha0)") {
    RngStream rng(21);
    const InarParams params(1.0, {});
    const auto series = inar::simulate(params, 100000, 100, rng);
    std::vector<double> xs(series.counts.begin(), series.counts.end());
    const auto ms = stats::mean_se(xs);
    CHECK(std::abs(ms.mean - 1.0) < 3.0 * ms.se);
    CHECK(std::abs(stats::sample_variance(xs) - 1.0) < 0.02);
    const double p = stats::chi2_gof_pvalue(series.counts, [](std::int64_t k) {
        return std::exp(-1.0 - std::lgamma(static_cast<double>(k) + 1.0));
    });
    CHECK(p > 0.01);
}

TEST_CASE("simulate: stationary mean alpha0/(1-K)") {
    RngStream rng(22);
    const auto series = inar::simulate(kGeoHalf, 100000, inar::default_burn_in(kGeoHalf), rng);
    std::vector<double> xs(series.counts.begin(), series.counts.end());
    const auto ms = stats::batch_means_se(xs, 100);
    CHECK(std::abs(ms.mean - 2.0) < 3.0 * ms.se);
}

TEST_CASE("simulate: deterministic under a fixed stream") {
    RngStream a(99, 5), b(99, 5);
    const auto s1 = inar::simulate(kGeoHalf, 500, 100, a);
    const auto s2 = inar::simulate(kGeoHalf, 500, 100, b);
    CHECK(s1.counts == s2.counts);
}

TEST_CASE("simulate_family: trivial and expected total size") {
    RngStream rng(31);
    const InarParams pure(1.0, {});
    const auto fam = inar::simulate_family(pure, 10, rng);
    CHECK(fam.total_size == 1);
    CHECK(fam.family[0] == 1);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(fam.family[n] == 0);
    CHECK(fam.generation_sizes == std::vector<std::int64_t>{1});

    // E[S] = 1/(1-K) = 2.
    const std::size_t reps = 100000;
    std::vector<double> sizes(reps);
    for (auto& s : sizes)
        s = static_cast<double>(inar::simulate_family(kGeoHalf, 60, rng).total_size);
    const auto ms = stats::mean_se(sizes);
    CHECK(std::abs(ms.mean - 2.0) < 3.0 * ms.se);
}

TEST_CASE("simulate_family: embedded generation process has mean K^g") {
    RngStream rng(32);
    const std::size_t reps = 100000;
    std::vector<std::vector<double>> y(4, std::vector<double>(reps, 0.0));
    for (std::size_t r = 0; r < reps; ++r) {
        const auto fam = inar::simulate_family(kGeoHalf, 60, rng);
        for (std::size_t g = 0; g < 4 && g < fam.generation_sizes.size(); ++g)
            y[g][r] = static_cast<double>(fam.generation_sizes[g]);
    }
    for (std::size_t g = 0; g < 4; ++g) {
        const auto ms = stats::mean_se(y[g]);
        const double expect = std::pow(0.5, static_cast<double>(g));
        INFO("generation " << g);
        CHECK(std::abs(ms.mean - expect) < 3.0 * ms.se + 1e-12);
    }
}

TEST_CASE("simulate_family: E[F_n] equals beta_n (family recursion identity)") {
    RngStream rng(33);
    const std::size_t reps = 100000;
    const std::size_t horizon = 10;
    std::vector<std::vector<double>> f(horizon + 1, std::vector<double>(reps, 0.0));
    for (std::size_t r = 0; r < reps; ++r) {
        const auto fam = inar::simulate_family(kGeoHalf, horizon, rng);
        for (std::size_t n = 0; n <= horizon; ++n)
            f[n][r] = static_cast<double>(fam.family[n]);
    }
    const auto betas = inar::beta_coeffs(kGeoHalf, horizon);
    for (std::size_t n = 0; n <= horizon; ++n) {
        const auto ms = stats::mean_se(f[n]);
        INFO("lag " << n);
        CHECK(std::abs(ms.mean - betas[n]) < 3.0 * ms.se + 1e-12);
    }
}

TEST_CASE("simulate_branching: zero immigration, stationary mean, determinism") {
    RngStream rng(41);
    const InarParams silent(0.0, {0.5});
    const auto series = inar::simulate_branching(silent, 1000, 50, rng);
    for (auto c : series.counts) CHECK(c == 0);

    const auto lookback = inar::default_lookback(kGeoHalf);
    const auto big = inar::simulate_branching(kGeoHalf, 100000, lookback, rng);
    std::vector<double> xs(big.counts.begin(), big.counts.end());
    const auto ms = stats::batch_means_se(xs, 100);
    CHECK(std::abs(ms.mean - 2.0) < 3.0 * ms.se);

    RngStream a(5, 9), b(5, 9);
    CHECK(inar::simulate_branching(kGeoHalf, 200, lookback, a).counts ==
          inar::simulate_branching(kGeoHalf, 200, lookback, b).counts);
}

TEST_CASE("representation equivalence: recursion and branching agree in law") {
    RngStream rng(42);
    const std::size_t reps = 10000;
    const auto lookback = inar::default_lookback(kGeoHalf);
    std::vector<std::int64_t> via_recursion(reps), via_branching(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream s1 = rng.substream(2 * r);
        RngStream s2 = rng.substream(2 * r + 1);
        via_recursion[r] = inar::simulate(kGeoHalf, 1, 200, s1).counts[0];
        via_branching[r] = inar::simulate_branching(kGeoHalf, 1, lookback, s2).counts[0];
    }
    const double p = stats::chi2_two_sample_pvalue(via_recursion, via_branching);
    CHECK(p > 0.01);
}

TEST_CASE("beta_coeffs: identity case, geometric case, sum identity") {
    const InarParams pure(1.0, {});
    const auto b0 = inar::beta_coeffs(pure, 5);
    CHECK(b0 == std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0, 0.0});

    const auto b1 = inar::beta_coeffs(kGeoHalf, 30);
    for (std::size_t k = 0; k <= 30; ++k)
        CHECK(b1[k] == doctest::Approx(std::pow(0.5, static_cast<double>(k))).epsilon(1e-12));

    // Partial sums reach 1/(1 - alpha_sum) within 1e-9.
    for (const auto& params : {kGeoHalf, InarParams(0.4, {0.3, 0.2, 0.1}), exp_discretized()}) {
        const double target = 1.0 / (1.0 - params.alpha_sum());
        std::size_t n = 64;
        double sum = 0.0;
        for (;; n *= 2) {
            const auto betas = inar::beta_coeffs(params, n);
            sum = 0.0;
            for (double b : betas) sum += b;
            if (target - sum < 1e-9 || n > (1u << 24)) break;
        }
        CHECK(target - sum >= -1e-12);
        CHECK(target - sum < 1e-9);
    }
}

TEST_CASE("mean: closed form") {
    CHECK(inar::mean(InarParams(1.0, {})) == 1.0);
    CHECK(inar::mean(kGeoHalf) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(inar::mean(InarParams(0.0, {0.7})) == 0.0);
}

TEST_CASE("autocovariance: iid case and geometric closed form") {
    const auto r0 = inar::autocovariance(InarParams(1.0, {}), 4, 1e-10);
    CHECK(r0[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = 1; j <= 4; ++j) CHECK(r0[j] == 0.0);

    // alpha0=1, alpha1=0.5: R(j) = (8/3) * 0.5^|j|.
    const auto r = inar::autocovariance(kGeoHalf, 6, 1e-10);
    for (std::size_t j = 0; j <= 6; ++j) {
        CHECK(r[j] ==
              doctest::Approx(8.0 / 3.0 * std::pow(0.5, static_cast<double>(j))).epsilon(1e-9));
        CHECK(r[j] >= 0.0);
    }
    CHECK(r[0] == doctest::Approx(2.666667).epsilon(1e-6));
    CHECK(r[1] == doctest::Approx(1.333333).epsilon(1e-6));

    // sum_j R(j) <= alpha0/(1-K)^3: geometric sum gives 16/3, bound is 8.
    const auto longr = inar::autocovariance(kGeoHalf, 200, 1e-12);
    double total = 0.0;
    for (double v : longr) total += v;
    CHECK(total == doctest::Approx(16.0 / 3.0).epsilon(1e-9));
    CHECK(total <= 8.0);
}

TEST_CASE("autocovariance: empirical autocovariance of a long run") {
    RngStream rng(51);
    const std::size_t n = 1000000;
    const auto series = inar::simulate(kGeoHalf, n, inar::default_burn_in(kGeoHalf), rng);
    const auto theory = inar::autocovariance(kGeoHalf, 5, 1e-10);

    // Segment estimates give both the point estimate and its spread.
    const std::size_t n_seg = 100, seg = n / n_seg;
    for (std::size_t lag = 0; lag <= 5; ++lag) {
        std::vector<double> est(n_seg);
        for (std::size_t s = 0; s < n_seg; ++s) {
            const auto* block = series.counts.data() + s * seg;
            double mean = 0.0;
            for (std::size_t i = 0; i < seg; ++i) mean += static_cast<double>(block[i]);
            mean /= static_cast<double>(seg);
            double acc = 0.0;
            for (std::size_t i = 0; i + lag < seg; ++i)
                acc += (static_cast<double>(block[i]) - mean) *
                       (static_cast<double>(block[i + lag]) - mean);
            est[s] = acc / static_cast<double>(seg - lag);
        }
        const auto ms = stats::mean_se(est);
        INFO("lag " << lag);
        CHECK(std::abs(ms.mean - theory[lag]) < 4.0 * ms.se);
    }
}

TEST_CASE("residuals: white noise properties") {
    RngStream rng(52);
    const auto series = inar::simulate(kGeoHalf, 100000, inar::default_burn_in(kGeoHalf), rng);
    const auto u = inar::residuals(series, kGeoHalf);
    REQUIRE(u.size() == series.counts.size() - 1);

    const auto ms = stats::mean_se(u);  // uncorrelated: iid-style SE is exact for the mean
    CHECK(std::abs(ms.mean) < 3.0 * ms.se);

    std::vector<double> sq(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u[i] * u[i];
    const auto vs = stats::batch_means_se(sq, 100);
    CHECK(std::abs(vs.mean - 2.0) < 3.0 * vs.se);

    std::vector<double> lag1(u.size() - 1);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) lag1[i] = u[i] * u[i + 1] / vs.mean;
    const auto cs = stats::batch_means_se(lag1, 100);
    CHECK(std::abs(cs.mean) < 3.0 * cs.se);

    CountSeries tiny{1.0, 0, {1}};
    CHECK_THROWS_AS(static_cast<void>(inar::residuals(tiny, kGeoHalf)), SeriesTooShort);
}

TEST_CASE("mgf: trivial sequence and Poisson closed form") {
    CHECK(inar::mgf(kGeoHalf, FiniteSupportSeq{{0.0, 0.0}}) == 1.0);

    const InarParams pure(1.3, {});
    for (double s : {0.1, 0.5, 2.0}) {
        const double expect = std::exp(1.3 * (std::exp(-s) - 1.0));
        CHECK(inar::mgf(pure, FiniteSupportSeq{{-s}}, 1e-12) ==
              doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK_THROWS_AS(static_cast<void>(inar::mgf(kGeoHalf, FiniteSupportSeq{{0.1}})),
                    UnsupportedArgument);
}

TEST_CASE("mgf: matches Monte Carlo for a dependent pair") {
    RngStream rng(53);
    const FiniteSupportSeq t{{-0.2, -0.1}};
    const double value = inar::mgf(kGeoHalf, t, 1e-10);

    const std::size_t reps = 200000;
    std::vector<double> xs(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        RngStream sub = rng.substream(r);
        const auto s = inar::simulate(kGeoHalf, 2, 100, sub);
        xs[r] = std::exp(-0.2 * static_cast<double>(s.counts[0]) -
                         0.1 * static_cast<double>(s.counts[1]));
    }
    const auto ms = stats::mean_se(xs);
    CHECK(std::abs(ms.mean - value) < 3.0 * ms.se);
}

TEST_CASE("mgf: truncation tolerance is self-consistent") {
    const auto params = exp_discretized();
    FiniteSupportSeq t{{-0.3, -0.05, -0.2}};
    const double coarse = inar::mgf(params, t, 1e-5);
    const double fine = inar::mgf(params, t, 1e-12);
    CHECK(std::abs(coarse - fine) < 2e-5);
    CHECK(fine > 0.0);
    CHECK(fine < 1.0);
}

TEST_CASE("truncate: identity, geometric tail drop, monotone mean") {
    const auto same = inar::truncate(kGeoHalf, 5);
    CHECK(same.alphas() == kGeoHalf.alphas());
    CHECK(same.tail_bound() == 0.0);

    const auto params = exp_discretized();
    const auto t10 = inar::truncate(params, 10);
    REQUIRE(t10.order() == 10);
    double expect = 0.0;
    for (int k = 1; k <= 10; ++k) expect += 0.1 * std::exp(-0.1 * k);
    CHECK(t10.alpha_sum() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(t10.alpha_sum() == doctest::Approx(0.6010).epsilon(1e-4));

    double prev_mean = 0.0;
    double prev_k = -1.0;
    for (std::size_t p : {1ul, 5ul, 20ul, 80ul, 150ul, params.order()}) {
        const auto tp = inar::truncate(params, p);
        CHECK(tp.reproduction_mean() >= prev_k);
        const double m = inar::mean(tp);
        CHECK(m >= prev_mean);
        prev_mean = m;
        prev_k = tp.reproduction_mean();
    }
    CHECK(std::abs(prev_k - params.alpha_sum()) < 1e-15);
    CHECK(std::abs(prev_mean - inar::mean(params)) < 1e-6);
}
