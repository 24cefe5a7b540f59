#pragma once

// Counter-based 64-bit PRNG (SplitMix64) with independent streams.
//
// The generator is fixed by algorithm, not by library, so that runs are
// reproducible across platforms and implementation languages:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
//
// A stream with id d over seed s starts from the (d+1)-th raw output of a
// SplitMix64 seeded with s.  Doubles are (u64 >> 11) * 2^-53, giving values
// in [0,1).  Bounded integers use fixed-threshold rejection so the mapping
// is bias-free and identical everywhere.

#include <cstdint>
#include <vector>

namespace ops {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
        SplitMix64 seeder(seed);
        std::uint64_t derived = 0;
        for (std::uint64_t i = 0; i <= stream_id; ++i) derived = seeder.next();
        state_ = derived;
        initial_state_ = derived;
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], inclusive.  Requires lo <= hi.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
        const std::uint64_t limit = (~std::uint64_t{0} / span) * span;
        std::uint64_t r = next_u64();
        while (r >= limit) r = next_u64();
        return lo + static_cast<std::int64_t>(r % span);
    }

    /// k distinct values from {lo, ..., hi}, in random order.
    std::vector<std::int64_t> sample_distinct(std::int64_t lo, std::int64_t hi, std::size_t k) {
        std::vector<std::int64_t> pool;
        pool.reserve(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t v = lo; v <= hi; ++v) pool.push_back(v);
        std::vector<std::int64_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k && !pool.empty(); ++i) {
            const auto j = static_cast<std::size_t>(next_int(0, static_cast<std::int64_t>(pool.size()) - 1));
            out.push_back(pool[j]);
            pool[j] = pool.back();
            pool.pop_back();
        }
        return out;
    }

    std::uint64_t initial_state() const { return initial_state_; }

private:
    std::uint64_t state_ = 0;
    std::uint64_t initial_state_ = 0;
};

}  // namespace ops
