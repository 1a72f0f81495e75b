#include <doctest.h>

#include <cmath>
#include <set>

#include "ppsim/discretize.hpp"
#include "ppsim/errors.hpp"
#include "ppsim/io.hpp"
#include "ppsim/kernel.hpp"
#include "ppsim/rng.hpp"
#include "ppsim/stats.hpp"
#include "ppsim/types.hpp"
#include "test_util.hpp"

using namespace ppsim;
using testutil::grid_sum_oracle;
using testutil::quadrature_oracle;

namespace {

ReproductionKernel sample_table() {
    return ReproductionKernel::table({{0.5, 0.6}, {1.5, 0.2}, {2.0, 0.05}});
}

}  // namespace

TEST_CASE("rng: determinism and substreams") {
    RngStream a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() != c.next_u64()) differs = true;
    CHECK(differs);

    RngStream base(7);
    RngStream s1 = base.substream(1);
    RngStream s1b = base.substream(1);
    RngStream s2 = base.substream(2);
    CHECK(s1.next_u64() == s1b.next_u64());
    CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("rng: poisson matches its pmf on both sampler branches") {
    RngStream rng(101);
    for (double mean : {0.7, 3.5, 42.0}) {
        std::vector<std::int64_t> xs(200000);
        for (auto& x : xs) x = rng.poisson(mean);
        const double p = stats::chi2_gof_pvalue(xs, [mean](std::int64_t k) {
            return std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                            std::lgamma(static_cast<double>(k) + 1.0));
        });
        INFO("mean = " << mean);
        CHECK(p > 0.001);
    }
    CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("rng: exponential moments") {
    RngStream rng(77);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = rng.exponential(2.0);
    const auto ms = stats::mean_se(xs);
    CHECK(std::abs(ms.mean - 0.5) < 3.0 * ms.se);
    CHECK(stats::sample_variance(xs) == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("rng: binomial edge cases and law") {
    RngStream rng(5);
    CHECK(rng.binomial(7, 1.0) == 7);
    CHECK(rng.binomial(7, 0.0) == 0);
    CHECK(rng.binomial(0, 0.3) == 0);
    std::vector<std::int64_t> xs(100000);
    for (auto& x : xs) x = rng.binomial(4, 0.5);
    const double p = stats::chi2_gof_pvalue(xs, [](std::int64_t k) {
        if (k < 0 || k > 4) return 0.0;
        static const double pmf[] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
        return pmf[k];
    });
    CHECK(p > 0.001);
}

TEST_CASE("kernel_eval: vanishes on t <= 0 for every family") {
    const std::vector<ReproductionKernel> kernels = {
        ReproductionKernel::exponential(0.5, 1.0),
        ReproductionKernel::step(0.8, 1.0),
        sample_table(),
    };
    for (const auto& k : kernels) {
        CHECK(k(-1.0) == 0.0);
        CHECK(k(0.0) == 0.0);
        CHECK(k(-1e-12) == 0.0);
    }
}

TEST_CASE("kernel_eval: family definitions") {
    const auto exp_k = ReproductionKernel::exponential(0.5, 1.0);
    CHECK(exp_k(2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));

    const auto step_k = ReproductionKernel::step(0.8, 1.0);
    CHECK(step_k(0.5) == 0.8);
    CHECK(step_k(1.0) == 0.8);
    CHECK(step_k(1.1) == 0.0);

    const auto tab = sample_table();
    CHECK(tab(0.25) == doctest::Approx(0.3));     // halfway up the initial ramp
    CHECK(tab(1.0) == doctest::Approx(0.4));      // interpolation between knots
    CHECK(tab(2.0) == doctest::Approx(0.05));
    CHECK(tab(2.5) == 0.0);
}

TEST_CASE("kernel invariants: invalid parameters are rejected") {
    CHECK_THROWS_AS(ReproductionKernel::exponential(-0.1, 1.0), InvalidParams);
    CHECK_THROWS_AS(ReproductionKernel::exponential(0.5, 0.0), InvalidParams);
    CHECK_THROWS_AS(ReproductionKernel::step(0.5, -1.0), InvalidParams);
    CHECK_THROWS_AS(ReproductionKernel::table({{1.0, 0.2}, {0.5, 0.1}}), InvalidParams);
    CHECK_THROWS_AS(ReproductionKernel::table({{1.0, -0.2}}), InvalidParams);
}

TEST_CASE("kernel_mass: closed forms against quadrature oracle") {
    const auto exp_k = ReproductionKernel::exponential(0.5, 1.0);
    // Exponential tail beyond 60 is ~1e-26, irrelevant at this tolerance.
    CHECK(exp_k.mass() == doctest::Approx(quadrature_oracle(exp_k, 60.0)).epsilon(1e-9));
    CHECK(exp_k.mass() == doctest::Approx(0.5).epsilon(1e-12));

    const auto zero_k = ReproductionKernel::exponential(0.0, 1.0);
    CHECK(zero_k.mass() == 0.0);

    const auto step_k = ReproductionKernel::step(0.8, 1.0);
    CHECK(step_k.mass() == doctest::Approx(0.8).epsilon(1e-12));

    const auto tab = sample_table();
    CHECK(tab.mass() == doctest::Approx(quadrature_oracle(tab, 2.0)).epsilon(1e-9));
}

TEST_CASE("kernel tail_mass: matches quadrature at interior points") {
    const auto tab = sample_table();
    for (double t : {0.2, 0.5, 0.9, 1.7}) {
        const double oracle = quadrature_oracle([&](double s) { return tab(t + s); }, 2.0);
        CHECK(tab.tail_mass(t) == doctest::Approx(oracle).epsilon(1e-7));
    }
    const auto exp_k = ReproductionKernel::exponential(0.5, 2.0);
    CHECK(exp_k.tail_mass(1.0) == doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-12));
    const auto step_k = ReproductionKernel::step(0.8, 1.0);
    CHECK(step_k.tail_mass(0.25) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(step_k.tail_mass(2.0) == 0.0);
}

TEST_CASE("kernel sup_after: dominates the kernel beyond t") {
    RngStream rng(900);
    const std::vector<ReproductionKernel> kernels = {
        ReproductionKernel::exponential(0.7, 1.3),
        ReproductionKernel::step(0.4, 2.0),
        sample_table(),
    };
    for (const auto& k : kernels) {
        for (int i = 0; i < 200; ++i) {
            const double t = 3.0 * rng.uniform() - 0.5;
            const double bound = k.sup_after(t);
            for (int j = 0; j < 50; ++j) {
                const double s = t + 3.0 * rng.uniform() + 1e-9;
                CHECK(k(s) <= bound + 1e-12);
            }
        }
    }
}

TEST_CASE("kernel discontinuities") {
    CHECK(ReproductionKernel::exponential(0.5, 1.0).discontinuities() == std::vector<double>{0.0});
    CHECK(ReproductionKernel::exponential(0.0, 1.0).discontinuities().empty());
    CHECK(ReproductionKernel::step(0.8, 1.0).discontinuities() == std::vector<double>{0.0, 1.0});
    CHECK(sample_table().discontinuities() == std::vector<double>{2.0});
    CHECK(ReproductionKernel::table({{0.5, 0.6}, {1.0, 0.0}}).discontinuities().empty());
}

TEST_CASE("kernel sample_displacement: empirical CDF matches h/K") {
    RngStream rng(321);
    const std::vector<ReproductionKernel> kernels = {
        ReproductionKernel::exponential(0.5, 1.5),
        ReproductionKernel::step(0.3, 2.0),
        sample_table(),
    };
    const std::size_t n = 100000;
    for (const auto& k : kernels) {
        std::vector<double> xs(n);
        for (auto& x : xs) {
            x = k.sample_displacement(rng);
            CHECK(x > 0.0);
        }
        const double total = k.mass();
        for (double q : {0.25, 0.5, 0.8}) {
            // Probe at the q-quantile scale of the support.
            const double t = std::holds_alternative<ExponentialKernel>(k.family())
                                 ? -std::log(1.0 - q) / 1.5
                                 : q * k.support_end();
            const double expect = (total - k.tail_mass(t)) / total;
            double frac = 0.0;
            for (double x : xs)
                if (x <= t) frac += 1.0;
            frac /= static_cast<double>(n);
            const double se = std::sqrt(expect * (1.0 - expect) / static_cast<double>(n));
            CHECK(std::abs(frac - expect) < 4.0 * se + 1e-9);
        }
    }
}

TEST_CASE("k_delta: examples and brute-force oracle") {
    const auto zero_k = ReproductionKernel::exponential(0.0, 1.0);
    CHECK(k_delta(zero_k, 0.1) == 0.0);

    const auto exp_k = ReproductionKernel::exponential(1.0, 1.0);
    const double oracle = grid_sum_oracle(exp_k, 0.1, 3000);
    CHECK(k_delta(exp_k, 0.1) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(k_delta(exp_k, 0.1) == doctest::Approx(0.950833).epsilon(1e-6));

    const auto step_k = ReproductionKernel::step(0.8, 1.0);
    CHECK(k_delta(step_k, 0.25) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(k_delta(step_k, 0.25) == doctest::Approx(grid_sum_oracle(step_k, 0.25, 100)).epsilon(1e-12));

    const auto tab = sample_table();
    CHECK(k_delta(tab, 0.05) == doctest::Approx(grid_sum_oracle(tab, 0.05, 1000)).epsilon(1e-12));

    CHECK_THROWS_AS(static_cast<void>(k_delta(ReproductionKernel::exponential(2.0, 1.0), 0.1)),
                    DiscretizationSupercritical);
}

TEST_CASE("k_delta: Riemann convergence to the mass, monotone for exponential") {
    const auto exp_k = ReproductionKernel::exponential(0.5, 1.0);
    const double mass = exp_k.mass();
    double prev = 0.0;
    for (double delta : {0.2, 0.1, 0.05, 0.025}) {
        const double kd = k_delta(exp_k, delta);
        CHECK(kd < mass);
        CHECK(kd > prev);
        prev = kd;
    }
    CHECK(mass - prev < 0.007);
}

TEST_CASE("discretize: examples") {
    const auto zero_k = ReproductionKernel::exponential(0.0, 1.0);
    const auto p0 = discretize(1.0, zero_k, 0.1);
    CHECK(p0.alpha0() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p0.order() == 0);
    CHECK(p0.reproduction_mean() == 0.0);

    DiscretizeOptions opts;
    opts.trunc_horizon = 20.0;
    const auto exp_k = ReproductionKernel::exponential(1.0, 1.0);
    const auto p1 = discretize(1.0, exp_k, 0.1, opts);
    CHECK(p1.alpha0() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p1.order() == 200);
    for (std::size_t k : {1ul, 7ul, 200ul})
        CHECK(p1.alphas()[k - 1] ==
              doctest::Approx(0.1 * std::exp(-0.1 * static_cast<double>(k))).epsilon(1e-12));
    CHECK(p1.reproduction_mean() == doctest::Approx(0.950833).epsilon(1e-6));
    CHECK(p1.tail_bound() > 0.0);

    const auto step_k = ReproductionKernel::step(0.8, 1.0);
    const auto p2 = discretize(2.0, step_k, 0.5);
    CHECK(p2.alpha0() == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE(p2.order() == 2);
    CHECK(p2.alphas()[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p2.alphas()[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p2.tail_bound() == 0.0);
    CHECK(p2.reproduction_mean() == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("discretize: auto horizon meets the tail tolerance and matches k_delta") {
    RngStream rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        const double scale = 0.2 + 0.7 * rng.uniform();
        const double decay = 0.5 + 2.0 * rng.uniform();
        const auto k = ReproductionKernel::exponential(scale, decay);
        const double delta = 0.05 + 0.2 * rng.uniform();
        double kd = 0.0;
        try {
            kd = k_delta(k, delta);
        } catch (const DiscretizationSupercritical&) {
            continue;
        }
        const auto params = discretize(1.3, k, delta);
        CHECK(params.reproduction_mean() == doctest::Approx(kd).epsilon(1e-12));
        CHECK(params.tail_bound() <= 1.0001e-10 * params.reproduction_mean());
        CHECK(params.reproduction_mean() < 1.0);
    }
    CHECK_THROWS_AS(discretize(1.0, ReproductionKernel::exponential(2.0, 1.0), 0.1),
                    DiscretizationSupercritical);
    DiscretizeOptions tight;
    tight.max_coeffs = 10;
    CHECK_THROWS_AS(discretize(1.0, ReproductionKernel::exponential(0.5, 1.0), 0.001, tight),
                    TailTooHeavy);
}

TEST_CASE("inar params: invariants enforced at construction") {
    CHECK_THROWS_AS(InarParams(1.0, {0.6, 0.4}), MassNotSubcritical);
    CHECK_THROWS_AS(InarParams(1.0, {0.5}, 0.5), MassNotSubcritical);
    CHECK_THROWS_AS(InarParams(-1.0, {}), InvalidParams);
    CHECK_THROWS_AS(InarParams(1.0, {-0.1}), InvalidParams);
    const InarParams ok(1.0, {0.3, 0.1}, 0.05);
    CHECK(ok.alpha_sum() == doctest::Approx(0.4));
    CHECK(ok.reproduction_mean() == doctest::Approx(0.45));
}

TEST_CASE("model json: exact schema and round trip") {
    const auto j = io::model_to_json(1.0, ReproductionKernel::exponential(0.5, 1.0), 0.1);
    CHECK(j.at("eta") == 1.0);
    CHECK(j.at("delta") == 0.1);
    CHECK(j.at("kernel").at("family") == "exponential");
    CHECK(j.at("kernel").at("a") == 0.5);
    CHECK(j.at("kernel").at("b") == 1.0);

    RngStream rng(88);
    for (int rep = 0; rep < 60; ++rep) {
        ReproductionKernel k = ReproductionKernel::exponential(0.0, 1.0);
        const int fam = static_cast<int>(rng.uniform() * 3.0);
        if (fam == 0)
            k = ReproductionKernel::exponential(rng.uniform(), 0.5 + rng.uniform());
        else if (fam == 1)
            k = ReproductionKernel::step(rng.uniform(), 0.5 + rng.uniform());
        else
            k = ReproductionKernel::table({{0.3 + rng.uniform(), rng.uniform()},
                                           {2.0 + rng.uniform(), rng.uniform()}});
        const auto round = io::kernel_from_json(io::kernel_to_json(k));
        CHECK(round.mass() == doctest::Approx(k.mass()).epsilon(1e-15));
        for (int i = 0; i < 20; ++i) {
            const double t = 4.0 * rng.uniform() - 0.5;
            CHECK(round(t) == doctest::Approx(k(t)).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(io::kernel_from_json(nlohmann::json{{"family", "spline"}}), ConfigInvalid);
}

TEST_CASE("point pattern validation") {
    PointPattern p{{0.0, 2.0}, {0.5, 0.5, 1.7}};
    CHECK_NOTHROW(p.validate());
    PointPattern bad{{0.0, 2.0}, {1.0, 0.5}};
    CHECK_THROWS_AS(bad.validate(), InvalidParams);
    PointPattern outside{{0.0, 2.0}, {2.5}};
    CHECK_THROWS_AS(outside.validate(), InvalidParams);
}
