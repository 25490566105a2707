#pragma once

#include <cstdint>
#include <vector>

#include "ldrw/measure.hpp"
#include "ldrw/variational.hpp"
#include "ldrw/walk.hpp"

namespace ldrw {

// sum_{x,y} V(x-y) L(x) L(y) for the trajectory's occupation measure L: the
// rescaled self-interaction of the path (intersection local time for the
// on-diagonal indicator).
double intersection_functional(const Trajectory& traj, const DifferencePotential& v);

struct LogPartitionEstimate {
    double estimate = 0;  // (1/t) log of the sample mean of exp(t * functional)
    double ci_low = 0;    // bootstrap 95% interval on the same scale
    double ci_high = 0;
    int n_samples = 0;
    bool heavy_tail = false;  // top sample carries more than half the weight
};

LogPartitionEstimate estimate_log_partition(const RateKernel& kernel, const DifferencePotential& v,
                                            double t, int n_samples, std::uint64_t seed,
                                            int threads = 0);

struct StayCheck {
    double empirical = 0;
    double exact = 0;  // exp(-total_rate * t)
    double sigma = 0;  // binomial std dev of the empirical frequency
    bool within_4sigma = false;
    int n_samples = 0;
};

StayCheck stay_probability_check(const RateKernel& kernel, double t, int n_samples,
                                 std::uint64_t seed, int threads = 0);

struct BallDecayPoint {
    double t = 0;
    double rate = 0;  // -(1/t) log of the hit frequency; NaN when no hits
    int hits = 0;
    int n_samples = 0;
};

// Empirical decay rate of P(embedded occupation measure within delta of the
// target) along a time grid.
std::vector<BallDecayPoint> ball_decay_rates(const RateKernel& kernel, const CompactPoint& target,
                                             double delta, const std::vector<double>& t_grid,
                                             int n_samples, std::uint64_t seed,
                                             std::int64_t link_radius = 5, double mass_floor = 0.01,
                                             int metric_level = 48, int threads = 0);

}  // namespace ldrw
