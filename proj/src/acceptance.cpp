#include "ldrw/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "ldrw/decompose.hpp"
#include "ldrw/mc.hpp"
#include "ldrw/measure.hpp"
#include "ldrw/rate.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/testfn.hpp"
#include "ldrw/variational.hpp"
#include "ldrw/walk.hpp"

namespace ldrw {

namespace {

RateKernel srw1() {
    std::map<LatticePoint, double> jumps;
    jumps[{1}] = 0.5;
    jumps[{-1}] = 0.5;
    return RateKernel(1, jumps);
}

RateKernel nn2() {
    std::map<LatticePoint, double> jumps;
    jumps[{1, 0}] = 0.25;
    jumps[{-1, 0}] = 0.25;
    jumps[{0, 1}] = 0.25;
    jumps[{0, -1}] = 0.25;
    return RateKernel(2, jumps);
}

// Uniform probability on {0, ..., n-1} in d = 1.
SparseMeasure block_measure(std::int64_t n, double mass = 1.0) {
    std::map<LatticePoint, double> e;
    for (std::int64_t i = 0; i < n; ++i) e[{i}] = mass / double(n);
    return SparseMeasure(1, std::move(e));
}

// The running example: two bumps drifting apart over a spreading background.
SparseMeasure two_bump_measure(std::int64_t n) {
    std::map<LatticePoint, double> e;
    for (std::int64_t i = n - 1; i <= n + 1; ++i) e[{i}] += 0.5 / 3.0;
    for (std::int64_t i = -n - 1; i <= -n + 1; ++i) e[{i}] += 1.0 / 3.0 / 3.0;
    for (std::int64_t i = -n; i <= n; ++i) e[{i}] += 1.0 / 6.0 / double(2 * n + 1);
    return SparseMeasure(1, std::move(e));
}

CompactPoint two_bump_limit() {
    std::vector<Orbit> orbits;
    orbits.emplace_back(block_measure(3, 0.5));
    orbits.emplace_back(block_measure(3, 1.0 / 3.0));
    return CompactPoint(1, std::move(orbits));
}

SparseMeasure random_connected_measure(const RateKernel& kernel, CounterRng& rng,
                                       std::int64_t box_radius) {
    std::vector<LatticePoint> support{origin(kernel.dim())};
    std::size_t target = 3 + std::size_t(rng.next_below(8));
    std::vector<std::pair<LatticePoint, double>> jumps(kernel.jumps().begin(),
                                                       kernel.jumps().end());
    int guard = 0;
    while (support.size() < target && ++guard < 400) {
        const LatticePoint& from = support[std::size_t(rng.next_below(support.size()))];
        LatticePoint cand = add(from, jumps[std::size_t(rng.next_below(jumps.size()))].first);
        if (linf_norm(cand) > box_radius) continue;
        if (std::find(support.begin(), support.end(), cand) == support.end())
            support.push_back(cand);
    }
    double total_mass = 0.5 + 0.5 * rng.next_unit();
    std::map<LatticePoint, double> e;
    double raw = 0;
    std::vector<double> ws;
    for (std::size_t i = 0; i < support.size(); ++i) {
        ws.push_back(0.2 + 0.8 * rng.next_unit());
        raw += ws.back();
    }
    for (std::size_t i = 0; i < support.size(); ++i)
        e[support[i]] = ws[i] / raw * total_mass;
    return SparseMeasure(kernel.dim(), std::move(e));
}

SparseMeasure random_measure(CounterRng& rng, std::int64_t box_radius, double mass_cap) {
    std::size_t count = 1 + std::size_t(rng.next_below(8));
    std::map<LatticePoint, double> e;
    for (std::size_t i = 0; i < count; ++i) {
        std::int64_t x = std::int64_t(rng.next_below(std::uint64_t(2 * box_radius + 1))) - box_radius;
        e[{x}] += 0.1 + rng.next_unit();
    }
    double raw = 0;
    for (const auto& [x, w] : e) raw += w;
    double total = mass_cap * (0.3 + 0.7 * rng.next_unit());
    for (auto& [x, w] : e) w *= total / raw;
    return SparseMeasure(1, std::move(e));
}

CompactPoint random_compact_point(CounterRng& rng) {
    std::size_t orbit_count = 1 + std::size_t(rng.next_below(3));
    std::vector<Orbit> orbits;
    double budget = 1.0;
    for (std::size_t i = 0; i < orbit_count; ++i) {
        double share = budget * (0.2 + 0.6 * rng.next_unit()) / double(orbit_count);
        SparseMeasure mu = random_measure(rng, 6, share);
        if (!mu.empty()) orbits.emplace_back(mu);
        budget -= share;
    }
    return CompactPoint(1, std::move(orbits));
}

// Intersection functional straight from the definition: a double integral
// over the piecewise-constant path, O(segments^2).
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

struct Budget {
    double seconds = 0;  // 0 means no stated bound
};

CriterionResult run_criterion(const std::string& name, Budget budget,
                              const std::function<bool(std::ostringstream&)>& body) {
    CriterionResult result;
    result.name = name;
    std::ostringstream detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << " exception: " << e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget.seconds > 0 && result.seconds >= budget.seconds) {
        detail << " [over time budget " << budget.seconds << "s]";
        ok = false;
    }
    result.pass = ok;
    result.detail = detail.str();
    return result;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream* log, int threads) {
    std::vector<CriterionResult> results;
    const RateKernel k1 = srw1();
    const RateKernel k2 = nn2();
    double lambda_hat = 0;  // filled by the quadratic-tilt criterion

    auto emit = [&](const CriterionResult& r) {
        results.push_back(r);
        if (log) {
            char line[160];
            std::snprintf(line, sizeof line, "%s  %-26s %7.2fs  %s", r.pass ? "PASS" : "FAIL",
                          r.name.c_str(), r.seconds, r.detail.c_str());
            *log << line << "\n" << std::flush;
        }
    };

    // 1. Closed-form ground truth for the rate function.
    emit(run_criterion("rate-ground-truth", {1.0}, [&](std::ostringstream& d) {
        bool ok = dirichlet_energy(k1, point_mass({0})) == 1.0;
        d << "I(delta0)=" << dirichlet_energy(k1, point_mass({0}));
        for (std::int64_t n : {2, 5, 10, 100}) {
            double got = dirichlet_energy(k1, block_measure(n));
            ok = ok && std::fabs(got - 1.0 / double(n)) <= 1e-12;
        }
        // Stay-probability cross-check: -(1/t) log P(no jump by t) is the
        // total rate, which must equal I(delta0).
        double t = 1.0;
        double from_stay = -std::log(std::exp(-k1.total_rate() * t)) / t;
        ok = ok && std::fabs(from_stay - dirichlet_energy(k1, point_mass({0}))) <= 1e-12;
        return ok;
    }));

    // 2. Dual identification: the feasible dual never beats the energy and
    // gets within 1e-3 of it.
    emit(run_criterion("dual-identification", {30.0}, [&](std::ostringstream& d) {
        bool ok = true;
        double worst_gap = 0, worst_over = 0;
        for (int i = 0; i < 20; ++i) {
            const RateKernel& kernel = i < 10 ? k1 : k2;
            CounterRng rng(0xd007, std::uint64_t(i));
            SparseMeasure mu = random_connected_measure(kernel, rng, 8);
            DualBound bound = dual_lower_bound(kernel, mu, 10, 6);
            double energy = dirichlet_energy(kernel, mu);
            worst_gap = std::max(worst_gap, energy - bound.value);
            worst_over = std::max(worst_over, bound.value - energy);
            ok = ok && (energy - bound.value) <= 1e-3 && (bound.value - energy) <= 1e-12;
        }
        d << "worst gap=" << worst_gap << " overshoot=" << worst_over;
        return ok;
    }));

    // 3. Eigenvalue oracle vs the lattice point-potential closed form.
    std::vector<double> eigenvalues;
    emit(run_criterion("eigenvalue-oracle", {10.0}, [&](std::ostringstream& d) {
        bool ok = true;
        for (double v : {1.0, 2.0, 4.0}) {
            SiteFunction pot;
            pot[{0}] = v;
            VariationalSolution sol = solve_linear_tilt(k1, pot, 60);
            eigenvalues.push_back(sol.value);
            double closed = std::sqrt(v * v + 1.0) - 1.0;
            ok = ok && std::fabs(sol.value - closed) <= 1e-8;
            if (v == 4.0) d << "lambda(4)=" << sol.value;
        }
        return ok;
    }));

    // 4. Two independent algorithms, one value.
    emit(run_criterion("two-algorithm-agreement", {}, [&](std::ostringstream& d) {
        bool ok = eigenvalues.size() == 3;
        double worst = 0;
        const double vs[3] = {1.0, 2.0, 4.0};
        for (int i = 0; i < 3 && ok; ++i) {
            SiteFunction pot;
            pot[{0}] = vs[i];
            VariationalSolution sol = solve_linear_tilt_gradient(k1, pot, 60, 8, 0xace, threads);
            worst = std::max(worst, std::fabs(sol.value - eigenvalues[std::size_t(i)]));
        }
        d << "worst |gradient - eigen|=" << worst;
        return ok && worst <= 1e-6;
    }));

    // 5. Quadratic tilt bracket and maximizer structure.
    emit(run_criterion("application2-bracket", {60.0}, [&](std::ostringstream& d) {
        SiteFunction vmap;
        vmap[{0}] = 4.0;
        DifferencePotential v(1, vmap);
        VariationalSolution sol = solve_quadratic_tilt(k1, v, 40, 16, 0xbead, threads);
        lambda_hat = sol.value;
        MaximizerReport rep = check_maximizer_properties(k1, v, sol.maximizer);
        d << "lambda_hat=" << sol.value << " margin=" << sol.value - 3.0
          << " mass=" << rep.mass << " pieces=" << rep.piece_count;
        bool ok = sol.value >= 3.0 && sol.value <= 4.0;
        ok = ok && sol.value - 3.0 >= 1e-4;  // strictly above the point-mass value
        ok = ok && std::fabs(sol.maximizer.mass() - 1.0) <= 1e-8;
        ok = ok && rep.is_probability && rep.single_piece;
        return ok;
    }));

    // 6. Monte Carlo against the variational value at finite horizon.
    emit(run_criterion("monte-carlo-consistency", {300.0}, [&](std::ostringstream& d) {
        SiteFunction vmap;
        vmap[{0}] = 4.0;
        DifferencePotential v(1, vmap);
        LogPartitionEstimate est = estimate_log_partition(k1, v, 8.0, 100000, 0xcafe, threads);
        double width = est.ci_high - est.ci_low;
        d << "estimate=" << est.estimate << " ci=[" << est.ci_low << "," << est.ci_high
          << "] heavy_tail=" << (est.heavy_tail ? 1 : 0);
        bool ok = est.estimate >= 3.0 - width && est.estimate <= lambda_hat + 0.3;
        for (double t : {0.5, 1.0, 2.0}) {
            StayCheck stay = stay_probability_check(k1, t, 100000, 0xfade, threads);
            ok = ok && stay.within_4sigma;
        }
        return ok;
    }));

    // 7. Metric axioms, orbit invariance, and the two-bump trend.
    emit(run_criterion("metric-compactification", {60.0}, [&](std::ostringstream& d) {
        bool ok = true;
        const double slack = std::ldexp(1.0, -48) + 1e-12;
        CounterRng rng(0x731, 0);
        for (int i = 0; i < 500 && ok; ++i) {
            CompactPoint a = random_compact_point(rng);
            CompactPoint b = random_compact_point(rng);
            CompactPoint c = random_compact_point(rng);
            double ab = compact_distance(a, b).value;
            double ba = compact_distance(b, a).value;
            double bc = compact_distance(b, c).value;
            double ac = compact_distance(a, c).value;
            ok = ok && ab == ba && ac <= ab + bc + slack;
        }
        CounterRng rng2(0x732, 0);
        for (int i = 0; i < 50 && ok; ++i) {
            SparseMeasure mu = random_measure(rng2, 6, 1.0);
            if (mu.empty()) continue;
            std::int64_t s = std::int64_t(rng2.next_below(2001)) - 1000;
            CompactPoint one(1, {Orbit(mu)});
            CompactPoint other(1, {Orbit(mu.shifted({s}))});
            ok = ok && compact_distance(one, other).value == 0.0;
        }
        CompactPoint limit = two_bump_limit();
        double prev = std::numeric_limits<double>::infinity();
        double first = 0, last = 0;
        for (std::int64_t n : {20, 50, 100, 200}) {
            double dist = compact_distance(embed(two_bump_measure(n)), limit).value;
            if (n == 20) first = dist;
            last = dist;
            ok = ok && dist <= prev;
            prev = dist;
        }
        ok = ok && last < first;
        d << "two-bump D: n20=" << first << " n200=" << last;
        return ok;
    }));

    // 8. Rate-function property suite.
    emit(run_criterion("rate-function-properties", {}, [&](std::ostringstream& d) {
        bool ok = true;
        CounterRng rng(0x8a7e, 0);
        for (int i = 0; i < 1000 && ok; ++i) {
            SparseMeasure mu = random_measure(rng, 10, 0.5);
            if (mu.empty()) continue;
            std::int64_t s = std::int64_t(rng.next_below(501)) - 250;
            ok = ok && dirichlet_energy(k1, mu.shifted({s})) == dirichlet_energy(k1, mu);
            double base = dirichlet_energy(k1, mu);
            for (double lam : {0.0, 0.25, 0.5, 1.0})
                ok = ok && std::fabs(dirichlet_energy(k1, mu.scaled(lam)) - lam * base) <= 1e-12;
            SparseMeasure nu = random_measure(rng, 10, 0.5);
            ok = ok && dirichlet_energy(k1, add(mu, nu)) <=
                           base + dirichlet_energy(k1, nu) + 1e-12;
        }
        for (std::int64_t n : {5, 10, 20, 50})
            ok = ok &&
                 std::fabs(dirichlet_energy(k1, uniform_box(1, n)) - 1.0 / double(2 * n + 1)) <=
                     1e-12;
        std::vector<CompactPoint> fixtures;
        fixtures.push_back(two_bump_limit());
        {
            std::vector<Orbit> orbits;
            orbits.emplace_back(point_mass({0}, 0.4));
            orbits.emplace_back(block_measure(5, 0.3));
            fixtures.push_back(CompactPoint(1, std::move(orbits)));
        }
        for (const auto& xi : fixtures)
            for (std::int64_t n : {5, 10, 20}) {
                SparseMeasure mu_n = approximating_measure(xi, n, 10);
                double deficit = 1.0 - xi.total_mass();
                double bound = dirichlet_energy(k1, xi) +
                               deficit * dirichlet_energy(k1, uniform_box(1, n)) + 1e-12;
                ok = ok && dirichlet_energy(k1, mu_n) <= bound;
                ok = ok && std::fabs(mu_n.mass() - 1.0) <= SparseMeasure::kMassSlack;
            }
        d << "1000 randomized cases + approximating-sequence fixtures";
        return ok;
    }));

    // 9. Intersection-rate curve and the brute-force functional oracle.
    emit(run_criterion("intersection-curve", {}, [&](std::ostringstream& d) {
        std::vector<double> thetas{0.0};
        const double lo = 0.5, hi = 4e6;
        for (int j = 0; j < 19; ++j)
            thetas.push_back(lo * std::pow(hi / lo, double(j) / 18.0));
        std::vector<CurvePoint> curve = intersection_rate_curve(k1, thetas, 60, threads);
        bool ok = curve.size() == thetas.size();
        for (const auto& pt : curve) ok = ok && pt.rate <= pt.y + 1e-6;
        const double spread = 1.0 / 121.0;
        ok = ok && curve.front().y > 0 && curve.front().y <= 2 * spread &&
             curve.front().rate <= 2 * spread;
        ok = ok && std::fabs(curve.back().y - 1.0) <= 1e-6 &&
             std::fabs(curve.back().rate - 1.0) <= 1e-6;
        d << "y0=" << curve.front().y << " rate0=" << curve.front().rate
          << " y_end=" << curve.back().y << " rate_end=" << curve.back().rate;

        SiteFunction vmap;
        vmap[{0}] = 1.0;
        DifferencePotential v(1, vmap);
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            Trajectory traj = simulate(k1, 5.0, {0}, 0x90ad, std::uint64_t(i));
            worst = std::max(worst, std::fabs(intersection_functional(traj, v) -
                                              brute_intersection(traj, v)));
        }
        ok = ok && worst <= 1e-12;
        d << " |fast-brute|=" << worst;
        return ok;
    }));

    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace ldrw
