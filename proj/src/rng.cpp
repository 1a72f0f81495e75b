#include "ppsim/rng.hpp"

#include <cmath>
#include <cstdlib>

#include "ppsim/errors.hpp"

namespace ppsim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += kGolden);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t sid = stream_id ^ 0x6A09E667F3BCC909ULL;
    std::uint64_t x = seed ^ splitmix64(sid);
    for (auto& w : s_) w = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden;
}

RngStream RngStream::substream(std::uint64_t id) const {
    // Fold the current identity into a fresh seed so chained splits never
    // collide with top-level streams.
    std::uint64_t x = seed_ ^ (kGolden * (stream_id_ + 0x51ULL));
    return RngStream(splitmix64(x), id);
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidParams("exponential: rate must be > 0");
    return -std::log1p(-uniform()) / rate;
}

std::int64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw InvalidParams("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Knuth product-of-uniforms inversion.
        const double limit = std::exp(-mean);
        std::int64_t k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }
    // PTRS transformed rejection (Hormann 1993), exact for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

std::int64_t RngStream::binomial(std::int64_t n, double prob) {
    if (n < 0) throw InvalidParams("binomial: n must be >= 0");
    if (!(prob >= 0.0 && prob <= 1.0))
        throw InvalidParams("binomial: prob must be in [0, 1]");
    if (prob == 0.0 || n == 0) return 0;
    if (prob == 1.0) return n;
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < n; ++i)
        if (uniform() < prob) ++count;
    return count;
}

}  // namespace ppsim
