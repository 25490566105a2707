#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ldrw/decompose.hpp"
#include "ldrw/measure.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/testfn.hpp"

using namespace ldrw;
using ldrw::testing::block_measure;
using ldrw::testing::random_measure_1d;

namespace {

SparseMeasure two_atoms() {
    std::map<LatticePoint, double> e;
    e[{0}] = 0.5;
    e[{100}] = 0.5;
    return SparseMeasure(1, e);
}

}  // namespace

TEST_CASE("far atoms split, near mass stays together") {
    Decomposition d = cluster_decompose(two_atoms(), 5, 0.1);
    REQUIRE(d.pieces.size() == 2);
    CHECK(d.pieces[0] == point_mass({0}, 0.5));  // mass tie broken by support order
    CHECK(d.pieces[1] == point_mass({100}, 0.5));
    CHECK(d.residual.empty());

    Decomposition single = cluster_decompose(point_mass({0}), 3, 0.9);
    REQUIRE(single.pieces.size() == 1);
    CHECK(single.pieces[0] == point_mass({0}));
    CHECK(single.residual.empty());
}

TEST_CASE("mass floor boundary cases on a connected block") {
    SparseMeasure nu = uniform_box(1, 50);
    Decomposition keep = cluster_decompose(nu, 1, 0.2);
    REQUIRE(keep.pieces.size() == 1);  // one connected cluster of full mass
    CHECK(keep.pieces[0] == nu);
    CHECK(keep.residual.empty());

    Decomposition drop = cluster_decompose(nu, 1, 1.5);
    CHECK(drop.pieces.empty());
    CHECK(drop.residual == nu);
}

TEST_CASE("decomposition partitions the measure exactly and separates pieces") {
    CounterRng rng(41, 0);
    for (int i = 0; i < 200; ++i) {
        SparseMeasure mu = random_measure_1d(rng, 30, 1.0);
        std::int64_t link = 1 + std::int64_t(rng.next_below(6));
        double floor = 0.3 * rng.next_unit();
        Decomposition d = cluster_decompose(mu, link, floor);

        SparseMeasure rebuilt = d.residual;
        for (const auto& piece : d.pieces) rebuilt = add(rebuilt, piece);
        CHECK(rebuilt == mu);

        for (std::size_t a = 0; a < d.pieces.size(); ++a)
            for (std::size_t b = a + 1; b < d.pieces.size(); ++b) {
                std::int64_t closest = 1 << 30;
                for (const auto& [x, wx] : d.pieces[a].entries())
                    for (const auto& [y, wy] : d.pieces[b].entries())
                        closest = std::min(closest, l1_norm(sub(x, y)));
                CHECK(closest > link);
            }
    }
}

TEST_CASE("embedding takes orbits of the pieces and forgets the shift") {
    CHECK(embed(point_mass({0})) == CompactPoint(1, {Orbit(point_mass({0}))}));
    CompactPoint both = embed(two_atoms());
    CHECK(both ==
          CompactPoint(1, {Orbit(point_mass({0}, 0.5)), Orbit(point_mass({0}, 0.5))}));

    CounterRng rng(42, 0);
    for (int i = 0; i < 100; ++i) {
        SparseMeasure mu = random_measure_1d(rng, 20, 1.0);
        std::int64_t s = std::int64_t(rng.next_below(201)) - 100;
        CHECK(embed(mu.shifted({s})) == embed(mu));
    }
}

TEST_CASE("separation statistic") {
    SiteFunction w;
    w[{0}] = 1.0;
    CHECK(separation_integral(point_mass({0}), point_mass({8}), w) == 0.0);
    CHECK(separation_integral(point_mass({0}), point_mass({0}), w) == 1.0);

    SiteFunction wide;
    for (std::int64_t z = -3; z <= 3; ++z) wide[{z}] = 1.0;
    CounterRng rng(43, 0);
    for (int i = 0; i < 100; ++i) {
        SparseMeasure mu = random_measure_1d(rng, 25, 1.0);
        Decomposition d = cluster_decompose(mu, 7, 0.0);  // link radius >= diam(supp W)
        for (std::size_t a = 0; a < d.pieces.size(); ++a)
            for (std::size_t b = a + 1; b < d.pieces.size(); ++b)
                CHECK(separation_integral(d.pieces[a], d.pieces[b], wide) == 0.0);
    }
}

namespace {

// Two bumps over a spreading uniform background, connected support.
SparseMeasure two_bump_measure(std::int64_t n) {
    std::map<LatticePoint, double> e;
    for (std::int64_t i = n - 1; i <= n + 1; ++i) e[{i}] += 0.5 / 3.0;
    for (std::int64_t i = -n - 1; i <= -n + 1; ++i) e[{i}] += 1.0 / 3.0 / 3.0;
    for (std::int64_t i = -n; i <= n; ++i) e[{i}] += 1.0 / 6.0 / double(2 * n + 1);
    return SparseMeasure(1, std::move(e));
}

// The same bumps pulled away from the background, disconnected support.
SparseMeasure separated_bump_measure(std::int64_t n) {
    std::map<LatticePoint, double> e;
    for (std::int64_t i = 3 * n - 1; i <= 3 * n + 1; ++i) e[{i}] += 0.5 / 3.0;
    for (std::int64_t i = -3 * n - 1; i <= -3 * n + 1; ++i) e[{i}] += 1.0 / 3.0 / 3.0;
    for (std::int64_t i = -n; i <= n; ++i) e[{i}] += 1.0 / 6.0 / double(2 * n + 1);
    return SparseMeasure(1, std::move(e));
}

}  // namespace

TEST_CASE("two-bump sequence: connected support embeds as one orbit but converges") {
    CompactPoint limit(1, {Orbit(block_measure(3, 0.5)), Orbit(block_measure(3, 1.0 / 3.0))});

    // The uniform background touches both bumps, so single linkage keeps the
    // whole measure in one cluster; the embedded point still approaches the
    // two-bump limit because the background disintegrates.
    CompactPoint embedded = embed(two_bump_measure(30), 3, 0.1);
    CHECK(embedded.orbits().size() == 1);
    double d30 = compact_distance(embedded, limit, 48).value;
    double d120 = compact_distance(embed(two_bump_measure(120), 3, 0.1), limit, 48).value;
    CHECK(d120 < d30);
    CHECK(d120 < 0.02);
}

TEST_CASE("separated bumps embed exactly as the limit point") {
    CompactPoint limit(1, {Orbit(block_measure(3, 0.5)), Orbit(block_measure(3, 1.0 / 3.0))});
    for (std::int64_t n : {20, 50}) {
        // Background mass 1/6 sits below the 0.2 floor, bumps clear it.
        CompactPoint embedded = embed(separated_bump_measure(n), 3, 0.2);
        CHECK(embedded == limit);
        CHECK(compact_distance(embedded, limit, 48).value == 0.0);
    }
}
