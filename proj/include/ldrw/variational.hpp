#pragma once

#include <cstdint>
#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/point.hpp"
#include "ldrw/walk.hpp"

namespace ldrw {

// Symmetric nonnegative pair potential V(x, y) = V(x - y) with a finite
// support peaking at the origin.
class DifferencePotential {
public:
    DifferencePotential(int dim, const SiteFunction& values);

    int dim() const { return dim_; }
    const SiteFunction& values() const { return values_; }
    double at(const LatticePoint& z) const;
    double peak() const;             // V(0)
    std::int64_t reach() const;      // max |z|_inf over the support
    std::int64_t l1_diameter() const;

private:
    int dim_;
    SiteFunction values_;
};

// sum_{x,y} V(x-y) mu(x) mu(y).
double interaction_energy(const DifferencePotential& v, const SparseMeasure& mu);

struct VariationalSolution {
    double value = 0;
    SparseMeasure maximizer = SparseMeasure(1);  // probability measure on the box
    std::int64_t box_radius = 0;
    int starts_used = 0;
    double gradient_norm = 0;      // KKT residual (or eigen residual)
    double boundary_mass = 0;      // maximizer mass on the box boundary shell
    bool converged = false;
};

// sup over probability measures mu on the box of integral(V dmu) - rate(mu),
// computed as the top eigenvalue of L + diag(V) with absorbing boundary.
// Dense solve for moderate boxes, shifted power iteration above that.
// The maximizer is the squared Perron eigenvector.
VariationalSolution solve_linear_tilt(const RateKernel& kernel, const SiteFunction& v,
                                      std::int64_t box_radius);

// Same objective maximized by projected gradient ascent on the unit sphere;
// an independent route to the eigenvalue.
VariationalSolution solve_linear_tilt_gradient(const RateKernel& kernel, const SiteFunction& v,
                                               std::int64_t box_radius, int n_starts,
                                               std::uint64_t seed, int threads = 0);

// sup over probability measures of interaction_energy(V, mu) - rate(mu) via
// projected gradient ascent over phi with mu = phi^2, ||phi||_2 = 1, phi >= 0,
// with n_starts random restarts plus the deterministic point-mass start.
// Requires V(0) > total_rate (the regime in which the tilt beats staying put).
VariationalSolution solve_quadratic_tilt(const RateKernel& kernel, const DifferencePotential& v,
                                         std::int64_t box_radius, int n_starts, std::uint64_t seed,
                                         int threads = 0);

struct CurvePoint {
    double theta;  // Lagrange multiplier of the self-intersection constraint
    double y;      // sum_x mu*(x)^2 at the optimum
    double rate;   // Dirichlet energy of the optimum; upper bound for the
                   // single-orbit rate at level y
};

// Traces y -> rate along minimizers of rate(mu) - theta * sum mu(x)^2 over
// probability measures on the box, one point per multiplier.
std::vector<CurvePoint> intersection_rate_curve(const RateKernel& kernel,
                                                const std::vector<double>& theta_grid,
                                                std::int64_t box_radius, int threads = 0);

struct MaximizerReport {
    double mass = 0;
    bool is_probability = false;  // |mass - 1| <= 1e-8
    int piece_count = 0;
    bool single_piece = false;
    bool merge_checked = false;   // only meaningful with >= 2 pieces and V(0) > 0
    double merge_gain = 0;        // objective gain from merging the two largest pieces
};

MaximizerReport check_maximizer_properties(const RateKernel& kernel, const DifferencePotential& v,
                                           const SparseMeasure& candidate);

}  // namespace ldrw
