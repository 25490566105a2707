#include "ldrw/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ldrw/decompose.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/testfn.hpp"
#include "ldrw/util.hpp"

namespace ldrw {

double intersection_functional(const Trajectory& traj, const DifferencePotential& v) {
    return interaction_energy(v, occupation_measure(traj));
}

LogPartitionEstimate estimate_log_partition(const RateKernel& kernel, const DifferencePotential& v,
                                            double t, int n_samples, std::uint64_t seed,
                                            int threads) {
    if (!(t > 0)) throw std::invalid_argument("estimate_log_partition: t must be > 0");
    if (n_samples < 100) throw std::invalid_argument("estimate_log_partition: need >= 100 samples");

    const std::size_t n = std::size_t(n_samples);
    std::vector<double> exponents(n);  // t * functional per sample
    const LatticePoint start = origin(kernel.dim());
    parallel_for(n, threads, [&](std::size_t i) {
        Trajectory traj = simulate(kernel, t, start, seed, i);
        exponents[i] = t * intersection_functional(traj, v);
    });

    const double log_n = std::log(double(n));
    const double m = *std::max_element(exponents.begin(), exponents.end());
    double sum = 0;
    for (double e : exponents) sum += std::exp(e - m);

    LogPartitionEstimate out;
    out.n_samples = n_samples;
    out.estimate = (m + std::log(sum) - log_n) / t;
    out.heavy_tail = 1.0 / sum > 0.5;

    // Percentile bootstrap of the log-mean-exp, resampling indices with a
    // derived stream per replicate so the interval is seed-reproducible.
    const int reps = 1000;
    std::vector<double> boot(std::size_t(reps), 0.0);
    parallel_for(std::size_t(reps), threads, [&](std::size_t r) {
        CounterRng rng(seed ^ 0xb007b007b007b007ull, r);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::exp(exponents[rng.next_below(n)] - m);
        boot[r] = (m + std::log(s) - log_n) / t;
    });
    std::sort(boot.begin(), boot.end());
    out.ci_low = boot[std::size_t(std::floor(0.025 * (reps - 1)))];
    out.ci_high = boot[std::size_t(std::ceil(0.975 * (reps - 1)))];
    return out;
}

StayCheck stay_probability_check(const RateKernel& kernel, double t, int n_samples,
                                 std::uint64_t seed, int threads) {
    if (!(t > 0)) throw std::invalid_argument("stay_probability_check: t must be > 0");
    if (n_samples < 1) throw std::invalid_argument("stay_probability_check: need samples");
    const std::size_t n = std::size_t(n_samples);
    std::vector<char> stayed(n, 0);
    const LatticePoint start = origin(kernel.dim());
    parallel_for(n, threads, [&](std::size_t i) {
        stayed[i] = simulate(kernel, t, start, seed, i).jump_times.empty() ? 1 : 0;
    });
    std::size_t count = 0;
    for (char c : stayed) count += std::size_t(c);

    StayCheck out;
    out.n_samples = n_samples;
    out.empirical = double(count) / double(n);
    out.exact = std::exp(-kernel.total_rate() * t);
    out.sigma = std::sqrt(out.exact * (1.0 - out.exact) / double(n));
    out.within_4sigma = std::fabs(out.empirical - out.exact) < 4.0 * out.sigma;
    return out;
}

std::vector<BallDecayPoint> ball_decay_rates(const RateKernel& kernel, const CompactPoint& target,
                                             double delta, const std::vector<double>& t_grid,
                                             int n_samples, std::uint64_t seed,
                                             std::int64_t link_radius, double mass_floor,
                                             int metric_level, int threads) {
    if (!(delta > 0)) throw std::invalid_argument("ball_decay_rates: delta must be > 0");
    std::vector<BallDecayPoint> out(t_grid.size());
    const LatticePoint start = origin(kernel.dim());
    for (std::size_t g = 0; g < t_grid.size(); ++g) {
        const double t = t_grid[g];
        if (!(t > 0)) throw std::invalid_argument("ball_decay_rates: grid times must be > 0");
        const std::size_t n = std::size_t(n_samples);
        std::vector<char> hit(n, 0);
        parallel_for(n, threads, [&](std::size_t i) {
            Trajectory traj = simulate(kernel, t, start, seed ^ (0x5eedull + g), i);
            CompactPoint embedded = embed(occupation_measure(traj), link_radius, mass_floor);
            hit[i] = compact_distance(embedded, target, metric_level).value < delta ? 1 : 0;
        });
        std::size_t hits = 0;
        for (char c : hit) hits += std::size_t(c);
        BallDecayPoint pt;
        pt.t = t;
        pt.hits = int(hits);
        pt.n_samples = n_samples;
        pt.rate = hits == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : -std::log(double(hits) / double(n)) / t;
        out[g] = pt;
    }
    return out;
}

}  // namespace ldrw
