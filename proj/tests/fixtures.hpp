#pragma once

#include <map>

#include "ldrw/measure.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/walk.hpp"

namespace ldrw::testing {

inline RateKernel srw1() {
    std::map<LatticePoint, double> jumps;
    jumps[{1}] = 0.5;
    jumps[{-1}] = 0.5;
    return RateKernel(1, jumps);
}

inline RateKernel nn2() {
    std::map<LatticePoint, double> jumps;
    jumps[{1, 0}] = 0.25;
    jumps[{-1, 0}] = 0.25;
    jumps[{0, 1}] = 0.25;
    jumps[{0, -1}] = 0.25;
    return RateKernel(2, jumps);
}

inline SparseMeasure block_measure(std::int64_t n, double mass = 1.0) {
    std::map<LatticePoint, double> e;
    for (std::int64_t i = 0; i < n; ++i) e[{i}] = mass / double(n);
    return SparseMeasure(1, std::move(e));
}

inline SparseMeasure random_measure_1d(CounterRng& rng, std::int64_t radius, double mass_cap) {
    std::size_t count = 1 + std::size_t(rng.next_below(6));
    std::map<LatticePoint, double> e;
    for (std::size_t i = 0; i < count; ++i) {
        std::int64_t x = std::int64_t(rng.next_below(std::uint64_t(2 * radius + 1))) - radius;
        e[{x}] += 0.1 + rng.next_unit();
    }
    double raw = 0;
    for (const auto& [x, w] : e) raw += w;
    double total = mass_cap * (0.3 + 0.7 * rng.next_unit());
    for (auto& [x, w] : e) w *= total / raw;
    return SparseMeasure(1, std::move(e));
}

}  // namespace ldrw::testing
