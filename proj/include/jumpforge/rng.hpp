#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace jumpforge {

/// SplitMix64 step; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of trajectory `index` under `master_seed`: two SplitMix64 rounds
/// over the pair, so neighbouring indices get decorrelated engines.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0xD1B54A32D192ED03ULL);
    return splitmix64(s);
}

/// Per-trajectory random stream, a pure function of (master_seed, index).
/// Uses mt19937_64, whose output sequence is fixed by the standard, and
/// converts bits to doubles by hand so draws match across standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
        : master_seed_(master_seed),
          index_(trajectory_index),
          engine_(stream_seed(master_seed, trajectory_index)) {}

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t trajectory_index() const noexcept { return index_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1].
    double uniform() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

private:
    std::uint64_t master_seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
};

}  // namespace jumpforge
