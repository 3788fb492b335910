#include "pam/rng.hpp"

#include <cassert>
#include <cmath>

namespace pam {

namespace {

// splitmix64 finalizer, http://xorshift.di.unimi.it/splitmix64.c
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

Rng Rng::stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix(mix(master_seed) ^ mix(stream_id ^ 0xa5a5a5a5a5a5a5a5ULL)));
}

std::uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
    assert(bound > 0);
    // Rejection sampling below the largest multiple of bound.
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) {
            return r % bound;
        }
    }
}

double Rng::uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal(double mean, double stddev) {
    for (;;) {
        const double u = 2.0 * uniform_real() - 1.0;
        const double v = 2.0 * uniform_real() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return mean + stddev * u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

} // namespace pam
