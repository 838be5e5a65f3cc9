#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sigtrade {

/// Stateless Gaussian source: every draw is a pure function of
/// (seed, stream, path, agent, step), so any execution order reproduces the
/// same numbers.
class CounterNormal {
public:
    enum class Stream : std::uint64_t {
        initial_q = 1,
        initial_v = 2,
        price = 3,
        signal_common = 4,
        signal_idiosyncratic = 5,
    };

    explicit CounterNormal(std::uint64_t seed) : seed_(mix(seed ^ 0x5157a7e5eedULL)) {}

    double operator()(Stream stream, std::uint64_t path, std::uint64_t agent,
                      std::uint64_t step) const {
        std::uint64_t h = mix(seed_ ^ static_cast<std::uint64_t>(stream));
        h = mix(h ^ path);
        h = mix(h ^ agent);
        h = mix(h ^ step);
        // Box-Muller on two 53-bit uniforms; u1 in (0, 1].
        const double u1 = (static_cast<double>(mix(h ^ 0x1ULL) >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(mix(h ^ 0x2ULL) >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace sigtrade
