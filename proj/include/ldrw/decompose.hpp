#pragma once

#include <cstdint>
#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/point.hpp"

namespace ldrw {

struct Decomposition {
    std::vector<SparseMeasure> pieces;  // mass descending; ties broken by support order
    SparseMeasure residual;
};

// Single-linkage split of the support: sites within l1-distance link_radius
// share a cluster; clusters of mass >= mass_floor become pieces and the rest
// is the residual. Pieces and residual partition mu entrywise.
Decomposition cluster_decompose(const SparseMeasure& mu, std::int64_t link_radius,
                                double mass_floor);

// Canonical embedding into the compactified space: the orbits of the pieces;
// the residual is dropped (it plays the role of the dispersed background).
CompactPoint embed(const SparseMeasure& mu, std::int64_t link_radius = 5,
                   double mass_floor = 0.01);

// Cross-correlation sum_{x,y} W(x-y) a(x) b(y); small for widely separated
// measures whenever W vanishes at infinity.
double separation_integral(const SparseMeasure& a, const SparseMeasure& b, const SiteFunction& w);

}  // namespace ldrw
