#pragma once

#include <map>
#include <vector>

#include "ldrw/point.hpp"

namespace ldrw {

// Finite-support nonnegative weights on Z^d with total mass at most one.
// Immutable after construction; zero and sub-threshold weights are pruned so
// supports stay finite and comparisons are reproducible.
class SparseMeasure {
public:
    static constexpr double kMassSlack = 1e-12;    // tolerance on total mass <= 1
    static constexpr double kWeightFloor = 1e-15;  // entries below this are dropped

    explicit SparseMeasure(int dim);
    SparseMeasure(int dim, std::map<LatticePoint, double> entries);

    int dim() const { return dim_; }
    const std::map<LatticePoint, double>& entries() const { return entries_; }
    double mass() const { return mass_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    double at(const LatticePoint& x) const;

    SparseMeasure shifted(const LatticePoint& by) const;
    SparseMeasure pruned(double eps) const;
    SparseMeasure scaled(double factor) const;

    friend bool operator==(const SparseMeasure& a, const SparseMeasure& b) {
        return a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }

private:
    int dim_;
    std::map<LatticePoint, double> entries_;
    double mass_;
};

SparseMeasure point_mass(const LatticePoint& x, double weight = 1.0);

// Uniform distribution on the lattice box [-n, n]^d.
SparseMeasure uniform_box(int dim, std::int64_t n, double total_mass = 1.0);

// total_mass spread evenly over the given sites.
SparseMeasure uniform_on(int dim, const std::vector<LatticePoint>& sites, double total_mass = 1.0);

// Entrywise sum; total mass must stay within the sub-probability bound.
SparseMeasure add(const SparseMeasure& a, const SparseMeasure& b);

// Translation class of a nonempty measure. The stored representative is the
// translate whose lexicographically smallest support point is the origin, so
// equal orbits compare equal exactly.
class Orbit {
public:
    explicit Orbit(const SparseMeasure& mu);

    const SparseMeasure& representative() const { return rep_; }
    double mass() const { return rep_.mass(); }

    friend bool operator==(const Orbit& a, const Orbit& b) { return a.rep_ == b.rep_; }

    // Order: mass descending, then support lexicographic. Gives CompactPoint a
    // deterministic normal form.
    friend bool operator<(const Orbit& a, const Orbit& b);

private:
    SparseMeasure rep_;
};

// A finite collection of orbits with total mass at most one: a point of the
// compactified measure space. Orbits are kept sorted so equality is
// independent of construction order.
class CompactPoint {
public:
    explicit CompactPoint(int dim);
    CompactPoint(int dim, std::vector<Orbit> orbits);

    int dim() const { return dim_; }
    const std::vector<Orbit>& orbits() const { return orbits_; }
    bool empty() const { return orbits_.empty(); }
    double total_mass() const;

    friend bool operator==(const CompactPoint& a, const CompactPoint& b) {
        return a.dim_ == b.dim_ && a.orbits_ == b.orbits_;
    }

private:
    int dim_;
    std::vector<Orbit> orbits_;
};

// Probability measure approximating xi: orbit representatives placed at
// centers spaced spacing*n apart along the first axis, with the mass deficit
// spread uniformly over [-n, n]^d. Throws if spacing*n cannot separate the
// supports.
SparseMeasure approximating_measure(const CompactPoint& xi, std::int64_t n, std::int64_t spacing);

}  // namespace ldrw
