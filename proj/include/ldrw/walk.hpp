#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/point.hpp"

namespace ldrw {

// Finite-support translation-invariant symmetric jump rates on Z^d. The
// kernel stores a(z) per displacement z != 0; symmetry a(z) = a(-z) is
// completed when only one side is given and rejected when both sides disagree.
class RateKernel {
public:
    RateKernel(int dim, const std::map<LatticePoint, double>& jumps);

    int dim() const { return dim_; }
    const std::map<LatticePoint, double>& jumps() const { return jumps_; }
    double total_rate() const { return total_rate_; }
    double rate(const LatticePoint& z) const;
    double max_jump_norm() const { return max_jump_norm_; }       // Euclidean
    std::int64_t max_jump_linf() const { return max_jump_linf_; }

    // Each symmetric pair {z, -z} once, keyed by the lexicographically larger
    // member. Iterating these visits every undirected edge class exactly once.
    const std::map<LatticePoint, double>& half_jumps() const { return half_jumps_; }

    // Cumulative rates in jump map order, for inverse-CDF displacement draws.
    const std::vector<std::pair<LatticePoint, double>>& cumulative() const { return cumulative_; }

private:
    int dim_;
    std::map<LatticePoint, double> jumps_;
    std::map<LatticePoint, double> half_jumps_;
    std::vector<std::pair<LatticePoint, double>> cumulative_;
    double total_rate_;
    double max_jump_norm_;
    std::int64_t max_jump_linf_;
};

// Jump skeleton of one continuous-time path on [0, horizon].
struct Trajectory {
    LatticePoint start;
    double horizon = 0;
    std::vector<double> jump_times;         // strictly increasing, in (0, horizon]
    std::vector<LatticePoint> jump_targets; // state after each jump

    void validate(const RateKernel& kernel) const;

    friend bool operator==(const Trajectory& a, const Trajectory& b) {
        return a.start == b.start && a.horizon == b.horizon && a.jump_times == b.jump_times &&
               a.jump_targets == b.jump_targets;
    }
};

struct AssumptionReport {
    double total_rate = 0;           // A2: sup_x sum_y a_{x,y}, finite by construction
    bool irreducible = false;        // A3: jumps generate Z^d as a group
    bool symmetric = false;          // A6: enforced at kernel construction
    bool bounded_translation_invariant = true;  // A1/A4: structural for this kernel class
    std::string confinement_bound;   // description of the u_t certificate for A5
    std::array<double, 3> chernoff_exponent_per_t{};  // at t = 1, 10, 100
};

AssumptionReport check_assumptions(const RateKernel& kernel);

// (Lf)(x) = sum_z a(z) [f(x+z) - f(x)], with f zero off its support.
// apply_generator returns (Lf)(x); the sign convention is the generator itself.
double apply_generator(const RateKernel& kernel, const SiteFunction& f, const LatticePoint& x);

// Exact simulation: exponential holding times at the total rate, displacement
// drawn proportionally to a(z). Deterministic for a given (seed, stream) on
// every platform. Sampling displacements only realizes translation
// equivariance exactly.
Trajectory simulate(const RateKernel& kernel, double horizon, const LatticePoint& start,
                    std::uint64_t seed, std::uint64_t stream = 0);

// Fraction of [0, horizon] spent at each site, including the final partial
// holding interval; total mass is one up to rounding.
SparseMeasure occupation_measure(const Trajectory& traj);

// Max Euclidean distance from the start over visited states.
double max_displacement(const Trajectory& traj);

}  // namespace ldrw
