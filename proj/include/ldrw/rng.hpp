#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace ldrw {

// Counter-based generator: the i-th output is the splitmix64 finalizer applied
// to base + i*gamma, with base derived from (seed, stream). No hidden state
// beyond the counter, so streams can be split freely across workers and the
// output is identical on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix(mix(seed) + mix(stream ^ 0x6a09e667f3bcc909ull))), counter_(0) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix(base_ + 0x9e3779b97f4a7c15ull * counter_++); }

    // Uniform on [0,1), 53-bit resolution.
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1]; safe as a log argument.
    double next_unit_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double next_exponential(double rate) {
        double dt = -std::log(next_unit_pos()) / rate;
        return dt > 0 ? dt : std::numeric_limits<double>::min();
    }

    // Standard normal via Box-Muller (one value per call, second discarded).
    double next_normal() {
        double u = next_unit_pos();
        double v = next_unit();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
    }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

}  // namespace ldrw
