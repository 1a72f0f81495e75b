#pragma once

#include <cstdint>

namespace ppsim {

// Seeded, splittable random stream (xoshiro256++ core, splitmix64 seeding).
//
// Identical (seed, stream_id) pairs reproduce identical draws; substreams
// derived for distinct ids are independent for all practical purposes, so
// Monte Carlo replicates can run concurrently and still be reproducible.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    // A fresh stream derived from this one; deterministic in (seed, stream_id, id).
    [[nodiscard]] RngStream substream(std::uint64_t id) const;

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();

    // Exponential with the given rate (> 0).
    double exponential(double rate);

    // Exact Poisson sampling: Knuth inversion for small means, Hormann's
    // PTRS transformed rejection for large ones.
    std::int64_t poisson(double mean);

    // Sum of n independent Bernoulli(prob) draws.
    std::int64_t binomial(std::int64_t n, double prob);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t s_[4];
};

}  // namespace ppsim
