#pragma once

#include <cstdint>

namespace pam {

/// Deterministic counter-based generator (splitmix64). The full generator
/// state is one u64, which lets it round-trip through the model weight file.
/// Single-owner: never share one instance between threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for (master seed, stream id). Streams with distinct
    /// ids are decorrelated regardless of how much either one is consumed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    /// Uniform integer in [0, bound). bound must be > 0. Unbiased.
    std::uint64_t uniform(std::uint64_t bound);

    /// Uniform double in [0, 1).
    double uniform_real();

    /// Gaussian draw (polar method); consumes a variable number of uniforms.
    double normal(double mean, double stddev);

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

    bool operator==(const Rng&) const = default;

private:
    std::uint64_t state_;
};

} // namespace pam
