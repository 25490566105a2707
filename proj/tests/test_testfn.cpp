#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ldrw/measure.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/testfn.hpp"

using namespace ldrw;
using ldrw::testing::block_measure;
using ldrw::testing::random_measure_1d;

namespace {

// Forward generation of the documented order: shells of constant
// (arity-2)+radius, arity ascending inside a shell, tuples in lexicographic
// order of concatenated coordinates, keeping exactly the tuples whose max
// infinity norm equals the radius. Independent of the unranking code path.
std::vector<std::pair<int, std::vector<LatticePoint>>> forward_enumeration(int dim,
                                                                           int max_shell) {
    std::vector<std::pair<int, std::vector<LatticePoint>>> out;
    for (int shell = 0; shell <= max_shell; ++shell) {
        for (int arity = 2; arity <= shell + 2; ++arity) {
            std::int64_t radius = shell - (arity - 2);
            int slots = arity - 1;
            std::vector<LatticePoint> tuple(std::size_t(slots),
                                            LatticePoint(std::size_t(dim), -radius));
            for (;;) {
                std::int64_t maxn = 0;
                for (const auto& p : tuple) maxn = std::max(maxn, linf_norm(p));
                if (maxn == radius) out.emplace_back(arity, tuple);
                // odometer over the concatenated coordinates, last fastest
                int slot = slots - 1, axis = dim - 1;
                for (;;) {
                    if (slot < 0) break;
                    if (tuple[std::size_t(slot)][std::size_t(axis)] < radius) {
                        ++tuple[std::size_t(slot)][std::size_t(axis)];
                        break;
                    }
                    tuple[std::size_t(slot)][std::size_t(axis)] = -radius;
                    if (--axis < 0) {
                        axis = dim - 1;
                        --slot;
                    }
                }
                if (slot < 0) break;
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("enumeration starts with the self-pair indicator") {
    TestFunction f = test_function(1, 1);
    CHECK(f.arity == 2);
    CHECK(f.offsets.size() == 1);
    CHECK(f.offsets[0] == LatticePoint{0});
}

TEST_CASE("enumeration matches independent forward generation") {
    for (int dim : {1, 2}) {
        auto expected = forward_enumeration(dim, dim == 1 ? 7 : 3);
        std::size_t n = std::min<std::size_t>(expected.size(), dim == 1 ? 3000 : 400);
        for (std::size_t r = 0; r < n; ++r) {
            TestFunction f = test_function(dim, r + 1);
            CHECK(f.arity == expected[r].first);
            CHECK(f.offsets == expected[r].second);
        }
    }
}

TEST_CASE("test functions are translation invariant indicators of norm one") {
    CounterRng rng(21, 0);
    for (std::uint64_t r = 1; r <= 10000; r += (r < 100 ? 1 : 97)) {
        TestFunction f = test_function(1, r);
        std::vector<LatticePoint> witness{LatticePoint{3}};
        for (const auto& z : f.offsets) witness.push_back(add(witness[0], z));
        CHECK(f.evaluate(witness) == 1.0);  // attains the sup norm

        std::int64_t shift = std::int64_t(rng.next_below(41)) - 20;
        std::vector<LatticePoint> moved;
        for (const auto& u : witness) moved.push_back(add(u, {shift}));
        CHECK(f.evaluate(moved) == 1.0);

        moved[1][0] += 1;
        CHECK(f.evaluate(moved) == 0.0);
    }
}

TEST_CASE("product integral closed forms") {
    TestFunction pair0 = test_function(1, 1);
    CHECK(product_integral(pair0, point_mass({0})) == 1.0);
    for (std::int64_t n : {1, 2, 5, 20})
        CHECK(product_integral(pair0, block_measure(n)) == doctest::Approx(1.0 / double(n)));

    CounterRng rng(22, 0);
    for (int i = 0; i < 200; ++i) {
        SparseMeasure mu = random_measure_1d(rng, 8, 1.0);
        std::int64_t x = std::int64_t(rng.next_below(31)) - 15;
        TestFunction f = test_function(1, 1 + rng.next_below(40));
        CHECK(product_integral(f, mu.shifted({x})) ==
              doctest::Approx(product_integral(f, mu)).epsilon(1e-14));
    }
}

TEST_CASE("product integral equals the brute-force tuple sum") {
    CounterRng rng(23, 0);
    for (int i = 0; i < 100; ++i) {
        SparseMeasure mu = random_measure_1d(rng, 4, 1.0);
        TestFunction f = test_function(1, 1 + rng.next_below(60));
        if (f.arity > 4) continue;
        std::vector<std::pair<LatticePoint, double>> sites(mu.entries().begin(),
                                                           mu.entries().end());
        double brute = 0;
        std::vector<std::size_t> idx(std::size_t(f.arity), 0);
        for (;;) {
            std::vector<LatticePoint> tuple;
            double w = 1;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                tuple.push_back(sites[idx[j]].first);
                w *= sites[idx[j]].second;
            }
            brute += w * f.evaluate(tuple);
            std::size_t k = idx.size();
            while (k > 0 && ++idx[k - 1] == sites.size()) idx[--k] = 0;
            if (k == 0) break;
        }
        CHECK(product_integral(f, mu) == doctest::Approx(brute).epsilon(1e-13));
    }
}

TEST_CASE("metric vanishes on identical and translated arguments") {
    std::map<LatticePoint, double> e;
    e[{0}] = 0.4;
    e[{2}] = 0.4;
    CompactPoint xi(1, {Orbit(SparseMeasure(1, e))});
    CHECK(compact_distance(xi, xi, 48).value == 0.0);
    CHECK(compact_distance(CompactPoint(1, {Orbit(point_mass({0}))}),
                           CompactPoint(1, {Orbit(point_mass({9}))}), 48)
              .value == 0.0);
}

TEST_CASE("metric against the empty point counts the vanishing indicators") {
    const int level = 48;
    auto order = forward_enumeration(1, 4);  // shells 0..4 already list > 48 functions
    REQUIRE(order.size() >= std::size_t(level));
    double expected = 0;
    for (std::size_t r = 0; r < std::size_t(level); ++r) {
        bool all_zero = true;
        for (const auto& p : order[r].second) all_zero = all_zero && linf_norm(p) == 0;
        if (all_zero) expected += std::ldexp(1.0, -int(r + 1)) / 2.0;
    }
    MetricResult got = compact_distance(CompactPoint(1, {Orbit(point_mass({0}))}),
                                        CompactPoint(1), level);
    CHECK(got.value == expected);
    CHECK(got.truncation_error == std::ldexp(1.0, -level));
}

TEST_CASE("pseudo-metric axioms and truncation monotonicity") {
    CounterRng rng(24, 0);
    auto random_point = [&rng]() {
        std::vector<Orbit> orbits;
        std::size_t n = 1 + rng.next_below(2);
        for (std::size_t i = 0; i < n; ++i) {
            SparseMeasure m = random_measure_1d(rng, 5, 0.45);
            if (!m.empty()) orbits.emplace_back(m);
        }
        return CompactPoint(1, std::move(orbits));
    };
    for (int i = 0; i < 100; ++i) {
        CompactPoint a = random_point(), b = random_point(), c = random_point();
        double ab = compact_distance(a, b).value;
        CHECK(ab == compact_distance(b, a).value);
        CHECK(compact_distance(a, c).value <=
              ab + compact_distance(b, c).value + std::ldexp(1.0, -48) + 1e-12);
    }
    CompactPoint a = random_point(), b = random_point();
    double prev_value = 0, prev_upper = 2.0;
    for (int level : {4, 8, 16, 32, 48}) {
        MetricResult r = compact_distance(a, b, level);
        CHECK(r.value >= prev_value);
        CHECK(r.value + r.truncation_error <= prev_upper + 1e-15);
        prev_value = r.value;
        prev_upper = r.value + r.truncation_error;
    }
}

TEST_CASE("uniform boxes totally disintegrate") {
    for (std::uint64_t r : {1ull, 2ull, 3ull, 5ull, 6ull}) {
        TestFunction f = test_function(1, r);
        if (f.arity != 2) continue;
        for (std::int64_t m : {2, 5, 10}) {
            double large = product_integral(f, uniform_box(1, 4 * m));
            double small = product_integral(f, uniform_box(1, m));
            CHECK(large <= small + 1e-12);
        }
        CHECK(product_integral(f, uniform_box(1, 4096)) < 1e-3);
    }
}

TEST_CASE("distinct small compact points are separated at level 64") {
    std::vector<CompactPoint> fixtures;
    fixtures.emplace_back(1, std::vector<Orbit>{Orbit(point_mass({0}))});
    fixtures.emplace_back(1, std::vector<Orbit>{Orbit(point_mass({0}, 0.5))});
    fixtures.emplace_back(1, std::vector<Orbit>{Orbit(point_mass({0}, 0.5)),
                                                Orbit(point_mass({0}, 0.5))});
    fixtures.emplace_back(1, std::vector<Orbit>{Orbit(block_measure(2))});
    fixtures.emplace_back(1, std::vector<Orbit>{Orbit(block_measure(3))});
    {
        std::map<LatticePoint, double> e;
        e[{0}] = 0.75;
        e[{1}] = 0.25;
        fixtures.emplace_back(1, std::vector<Orbit>{Orbit(SparseMeasure(1, e))});
        std::map<LatticePoint, double> g;
        g[{0}] = 0.25;
        g[{3}] = 0.75;
        fixtures.emplace_back(1, std::vector<Orbit>{Orbit(SparseMeasure(1, g))});
    }
    fixtures.emplace_back(1);  // empty point
    for (std::size_t i = 0; i < fixtures.size(); ++i)
        for (std::size_t j = i + 1; j < fixtures.size(); ++j)
            CHECK(compact_distance(fixtures[i], fixtures[j], 64).value > 0.0);
}

TEST_CASE("approximating sequence converges to its target in the metric") {
    CompactPoint target(1, {Orbit(block_measure(3, 0.5)), Orbit(block_measure(3, 1.0 / 3.0))});
    double prev = 2.0;
    double first = 0, last = 0;
    for (std::int64_t n : {2, 4, 8, 16, 32}) {
        SparseMeasure mu = approximating_measure(target, n, 10);
        double d = compact_distance(CompactPoint(1, {Orbit(mu)}), target, 48).value;
        if (n == 2) first = d;
        last = d;
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
    CHECK(last < first);
    CHECK(last < 0.02);
}
