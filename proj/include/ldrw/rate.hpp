#pragma once

#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/point.hpp"
#include "ldrw/walk.hpp"

namespace ldrw {

// Donsker-Varadhan rate of a sub-probability measure: the Dirichlet energy
// <sqrt(mu), (-L) sqrt(mu)>, i.e. the sum over undirected edges {x, x+z} of
// a(z) (sqrt(mu(x)) - sqrt(mu(x+z)))^2. Zero iff mu is empty.
double dirichlet_energy(const RateKernel& kernel, const SparseMeasure& mu);

// Extension to a compactified point: the sum over its orbits, which is
// representative-independent by translation invariance.
double dirichlet_energy(const RateKernel& kernel, const CompactPoint& xi);

// The same energy written as a sum over ordered pairs, i.e. twice the
// undirected value. Diagnostic for comparing against ordered-sum conventions.
double dirichlet_sum_ordered(const RateKernel& kernel, const SparseMeasure& mu);

// Test potential u = floor + bump with floor > 0 and bump >= 0 compactly
// supported, the feasible class of the dual representation of the rate.
struct DualPotential {
    double floor = 1.0;
    SiteFunction bump;
};

// integral of (-L u)/u against mu. At most dirichlet_energy(kernel, mu) for
// every feasible potential; the supremum over the class attains it.
double dual_form_value(const RateKernel& kernel, const DualPotential& u, const SparseMeasure& mu);

struct DualBound {
    double value;  // best feasible dual value found (certified lower bound)
    double gap;    // dirichlet_energy - value, always >= 0 up to rounding
};

// Maximizes the dual form over potentials supported on a box of the given
// radius around supp(mu): exact single-coordinate updates of the bump, with
// the floor annealed downward geometrically from 1. `sweeps` full passes are
// made per floor value.
DualBound dual_lower_bound(const RateKernel& kernel, const SparseMeasure& mu,
                           std::int64_t box_radius, int sweeps = 4);

// Multi-orbit dual functional: assigns the k bumps to k distinct orbits of xi
// and takes the best total dual value over lattice shifts of each orbit.
// Shifts with no support interaction contribute exactly zero, so the search
// over a finite window is exhaustive.
double multi_orbit_dual_value(const RateKernel& kernel, const CompactPoint& xi, double floor,
                              const std::vector<SiteFunction>& bumps);

}  // namespace ldrw
