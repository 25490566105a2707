#pragma once

#include <cstdint>
#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/point.hpp"

namespace ldrw {

// One member of the countable test-function family: the indicator
//   f(u_1,...,u_k) = prod_{i=2..k} 1{u_i - u_1 = z_i},
// which is diagonally translation invariant, vanishes away from the diagonal,
// and has sup norm one.
struct TestFunction {
    int dim;
    int arity;                          // k >= 2
    std::vector<LatticePoint> offsets;  // z_2 ... z_k
    std::uint64_t index;                // position in the global enumeration (1-based)

    double sup_norm() const { return 1.0; }
    double evaluate(const std::vector<LatticePoint>& points) const;
};

// Deterministic bijection index -> (arity, offsets). Functions are grouped in
// shells of constant (arity - 2) + box radius; within a shell arity ascends,
// and within an (arity, radius) block the offset tuples with max |z_i|_inf
// exactly equal to radius are ordered lexicographically by concatenated
// coordinates. index = 1 is the arity-2 self-pair indicator (z_2 = 0).
TestFunction test_function(int dim, std::uint64_t index);

// Integral of f against the |arity|-fold product of mu: a finite sum over the
// support. Depends on mu only through its translation orbit.
double product_integral(const TestFunction& f, const SparseMeasure& mu);

// Sum of the product integrals over the orbits of xi.
double product_integral(const TestFunction& f, const CompactPoint& xi);

struct MetricResult {
    double value;             // partial sum of the metric series up to the level
    double truncation_error;  // 2^[-level], a bound on the omitted tail
};

// Compactification metric between two orbit collections, truncated after
// `level` test functions. The true distance lies in
// [value, value + truncation_error].
MetricResult compact_distance(const CompactPoint& a, const CompactPoint& b, int level = 48);

}  // namespace ldrw
