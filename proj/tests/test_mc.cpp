#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ldrw/decompose.hpp"
#include "ldrw/mc.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/testfn.hpp"

using namespace ldrw;
using ldrw::testing::srw1;

namespace {

DifferencePotential point_potential(double v) {
    SiteFunction m;
    m[{0}] = v;
    return DifferencePotential(1, m);
}

double brute_intersection(const Trajectory& traj, const DifferencePotential& v) {
    std::vector<std::pair<LatticePoint, double>> segments;
    double prev = 0;
    const LatticePoint* site = &traj.start;
    for (std::size_t i = 0; i < traj.jump_times.size(); ++i) {
        segments.emplace_back(*site, traj.jump_times[i] - prev);
        prev = traj.jump_times[i];
        site = &traj.jump_targets[i];
    }
    segments.emplace_back(*site, traj.horizon - prev);
    double total = 0;
    for (const auto& [xa, da] : segments)
        for (const auto& [xb, db] : segments) total += v.at(sub(xa, xb)) * da * db;
    return total / (traj.horizon * traj.horizon);
}

}  // namespace

TEST_CASE("intersection functional closed cases and brute-force agreement") {
    DifferencePotential v = point_potential(1.0);

    Trajectory still;
    still.start = {0};
    still.horizon = 4.0;
    CHECK(intersection_functional(still, v) == 1.0);

    Trajectory split;
    split.start = {0};
    split.horizon = 2.0;
    split.jump_times = {1.0};
    split.jump_targets = {{1}};
    CHECK(intersection_functional(split, v) == 0.5);

    RateKernel k = srw1();
    for (int i = 0; i < 100; ++i) {
        Trajectory t = simulate(k, 6.0, {0}, 2000, std::uint64_t(i));
        double fast = intersection_functional(t, v);
        CHECK(std::fabs(fast - brute_intersection(t, v)) <= 1e-12);
        CHECK(fast > 0.0);
        CHECK(fast <= v.peak() + 1e-12);
    }
}

TEST_CASE("log partition estimate: exact zero case and reproducibility") {
    RateKernel k = srw1();
    DifferencePotential zero(1, SiteFunction{});
    LogPartitionEstimate none = estimate_log_partition(k, zero, 2.0, 500, 9, 2);
    CHECK(none.estimate == 0.0);
    CHECK(none.ci_low == 0.0);
    CHECK(none.ci_high == 0.0);

    DifferencePotential v = point_potential(2.0);
    LogPartitionEstimate a = estimate_log_partition(k, v, 3.0, 2000, 77, 2);
    LogPartitionEstimate b = estimate_log_partition(k, v, 3.0, 2000, 77, 1);
    CHECK(a.estimate == b.estimate);  // independent of thread count
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(a.ci_low <= a.estimate);
    CHECK(a.estimate <= a.ci_high);

    CHECK_THROWS(estimate_log_partition(k, v, 3.0, 50, 1, 1));
}

TEST_CASE("log partition estimate dominates its no-jump and mean lower bounds") {
    RateKernel k = srw1();
    DifferencePotential v = point_potential(2.0);
    const double t = 3.0;
    const int n = 4000;
    const std::uint64_t seed = 31337;
    LogPartitionEstimate est = estimate_log_partition(k, v, t, n, seed, 2);

    int stayed = 0;
    double mean = 0;
    for (int i = 0; i < n; ++i) {
        Trajectory traj = simulate(k, t, {0}, seed, std::uint64_t(i));
        if (traj.jump_times.empty()) ++stayed;
        mean += intersection_functional(traj, v);
    }
    mean /= n;
    CHECK(est.estimate >= mean - 1e-12);  // log-mean-exp above the mean
    REQUIRE(stayed > 0);
    double subset = (std::log(double(stayed) / double(n)) + t * v.peak()) / t;
    CHECK(est.estimate >= subset - 1e-12);  // no-jump paths alone
}

TEST_CASE("stay probability matches the exponential clock") {
    RateKernel k = srw1();
    for (double t : {0.01, 0.5, 1.0, 2.0}) {
        StayCheck chk = stay_probability_check(k, t, 100000, 0xfeed, 2);
        CHECK(chk.exact == doctest::Approx(std::exp(-t)));
        CHECK(chk.within_4sigma);
    }
    CHECK(stay_probability_check(k, 0.01, 1000, 1, 1).exact == doctest::Approx(0.99004983375));
    std::map<LatticePoint, double> fast;
    fast[{1}] = 1.0;
    fast[{-1}] = 1.0;
    StayCheck quick = stay_probability_check(RateKernel(1, fast), 1.0, 50000, 5, 2);
    CHECK(quick.exact == doctest::Approx(std::exp(-2.0)));
    CHECK(quick.within_4sigma);
}

TEST_CASE("ball decay rates bracket the stay rate") {
    RateKernel k = srw1();
    CompactPoint target(1, {Orbit(point_mass({0}))});

    // A unit-radius ball swallows every embedded measure: rate zero.
    auto wide = ball_decay_rates(k, target, 1.0, {2.0}, 500, 99, 5, 0.01, 48, 2);
    REQUIRE(wide.size() == 1);
    CHECK(wide[0].hits == wide[0].n_samples);
    CHECK(wide[0].rate == 0.0);

    // Small ball: every no-jump path lands exactly on the target, so the
    // decay rate cannot exceed the empirical stay rate.
    const double t = 3.0;
    const int n = 3000;
    auto narrow = ball_decay_rates(k, target, 0.05, {t}, n, 1234, 5, 0.01, 48, 2);
    REQUIRE(narrow.size() == 1);
    int stayed = 0;
    for (int i = 0; i < n; ++i)
        if (simulate(k, t, {0}, 1234 ^ 0x5eed, std::uint64_t(i)).jump_times.empty()) ++stayed;
    REQUIRE(stayed > 0);
    CHECK(narrow[0].hits >= stayed);
    CHECK(narrow[0].rate >= 0.0);
    CHECK(narrow[0].rate <= -std::log(double(stayed) / double(n)) / t + 1e-12);
}
