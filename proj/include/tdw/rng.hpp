#pragma once

#include <cstdint>

namespace tdw {

/// splitmix64 (Steele/Lea/Vigna). The full recurrence, so results can be
/// reproduced in any language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   output = z ^ (z >> 31)
///
/// All generator randomness in this project derives from this recurrence;
/// substreams are opened by seeding a child with one output of the parent.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ull;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    /// Uniform real in [lo, hi).
    double next_real(double lo, double hi) { return lo + next_double() * (hi - lo); }

    bool next_bool(double p_true) { return next_double() < p_true; }

    /// A decorrelated child stream (one parent draw as the child's seed).
    Rng fork() { return Rng(next_u64()); }

  private:
    std::uint64_t state_;
};

}  // namespace tdw
