#include "ldrw/testfn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldrw {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSat / b) return kSat;
    return a * b;
}

// Number of lattice points in the closed box of the given radius; 0 for radius < 0.
std::uint64_t box_size(int dim, std::int64_t radius) {
    if (radius < 0) return 0;
    std::uint64_t side = std::uint64_t(2 * radius + 1);
    std::uint64_t r = 1;
    for (int i = 0; i < dim; ++i) r = sat_mul(r, side);
    return r;
}

std::uint64_t sat_pow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r = sat_mul(r, base);
    return r;
}

// Tuples of (arity-1) offsets inside the radius box whose max norm is exactly
// the radius.
std::uint64_t block_count(int dim, int arity, std::int64_t radius) {
    int slots = arity - 1;
    std::uint64_t full = sat_pow(box_size(dim, radius), slots);
    std::uint64_t inner = sat_pow(box_size(dim, radius - 1), slots);
    return full == kSat ? kSat : full - inner;
}

bool next_in_box(LatticePoint& p, std::int64_t radius) {
    int axis = int(p.size()) - 1;
    while (axis >= 0 && p[std::size_t(axis)] == radius) {
        p[std::size_t(axis)] = -radius;
        --axis;
    }
    if (axis < 0) return false;
    ++p[std::size_t(axis)];
    return true;
}

std::vector<LatticePoint> unrank_block(int dim, int arity, std::int64_t radius, std::uint64_t m) {
    int slots = arity - 1;
    std::vector<LatticePoint> offsets;
    offsets.reserve(std::size_t(slots));
    bool extreme_seen = false;
    for (int slot = 0; slot < slots; ++slot) {
        int rem = slots - slot - 1;
        std::uint64_t any = sat_pow(box_size(dim, radius), rem);
        std::uint64_t inner = sat_pow(box_size(dim, radius - 1), rem);
        LatticePoint p(std::size_t(dim), -radius);
        for (;;) {
            bool extreme = extreme_seen || linf_norm(p) == radius;
            std::uint64_t completions = extreme ? any : (any == kSat ? kSat : any - inner);
            if (m < completions) {
                offsets.push_back(p);
                extreme_seen = extreme;
                break;
            }
            m -= completions;
            if (!next_in_box(p, radius))
                throw std::logic_error("test_function: unrank index out of block");
        }
    }
    return offsets;
}

}  // namespace

double TestFunction::evaluate(const std::vector<LatticePoint>& points) const {
    if (int(points.size()) != arity)
        throw std::invalid_argument("TestFunction::evaluate: wrong number of arguments");
    for (int i = 1; i < arity; ++i) {
        if (sub(points[std::size_t(i)], points[0]) != offsets[std::size_t(i - 1)]) return 0.0;
    }
    return 1.0;
}

TestFunction test_function(int dim, std::uint64_t index) {
    if (dim < 1) throw std::invalid_argument("test_function: dim must be >= 1");
    if (index < 1) throw std::invalid_argument("test_function: index must be >= 1");
    std::uint64_t idx = index - 1;
    for (std::uint64_t shell = 0;; ++shell) {
        for (std::uint64_t arity = 2; arity <= shell + 2; ++arity) {
            std::int64_t radius = std::int64_t(shell - (arity - 2));
            std::uint64_t cnt = block_count(dim, int(arity), radius);
            if (idx < cnt)
                return TestFunction{dim, int(arity), unrank_block(dim, int(arity), radius, idx),
                                    index};
            idx -= cnt;
        }
    }
}

double product_integral(const TestFunction& f, const SparseMeasure& mu) {
    if (f.dim != mu.dim()) throw std::invalid_argument("product_integral: dimension mismatch");
    double total = 0;
    for (const auto& [x, w] : mu.entries()) {
        double term = w;
        for (const auto& z : f.offsets) {
            term *= mu.at(add(x, z));
            if (term == 0) break;
        }
        total += term;
    }
    return total;
}

double product_integral(const TestFunction& f, const CompactPoint& xi) {
    double total = 0;
    for (const auto& orbit : xi.orbits()) total += product_integral(f, orbit.representative());
    return total;
}

MetricResult compact_distance(const CompactPoint& a, const CompactPoint& b, int level) {
    if (a.dim() != b.dim()) throw std::invalid_argument("compact_distance: dimension mismatch");
    if (level < 1) throw std::invalid_argument("compact_distance: level must be >= 1");
    double value = 0;
    for (int r = 1; r <= level; ++r) {
        TestFunction f = test_function(a.dim(), std::uint64_t(r));
        double diff = std::abs(product_integral(f, a) - product_integral(f, b));
        value += std::ldexp(diff / (1.0 + f.sup_norm()), -r);
    }
    return MetricResult{value, std::ldexp(1.0, -level)};
}

}  // namespace ldrw
