#include "ldrw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "ldrw/rng.hpp"

namespace ldrw {

RateKernel::RateKernel(int dim, const std::map<LatticePoint, double>& jumps) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("RateKernel: dim must be >= 1");
    if (jumps.empty()) throw std::invalid_argument("RateKernel: no jumps");
    for (const auto& [z, a] : jumps) {
        if (int(z.size()) != dim) throw std::invalid_argument("RateKernel: jump dimension mismatch");
        if (z == origin(dim)) throw std::invalid_argument("RateKernel: zero displacement not allowed");
        if (!(a > 0) || !std::isfinite(a))
            throw std::invalid_argument("RateKernel: rates must be finite and positive");
        LatticePoint mz = negate(z);
        auto it = jumps.find(mz);
        if (it != jumps.end() && it->second != a)
            throw std::invalid_argument("RateKernel: asymmetric rates for " + to_string(z));
        jumps_[z] = a;
        jumps_[mz] = a;  // complete the missing side
    }

    total_rate_ = 0;
    max_jump_norm_ = 0;
    max_jump_linf_ = 0;
    LatticePoint zero = origin(dim);
    for (const auto& [z, a] : jumps_) {
        total_rate_ += a;
        max_jump_norm_ = std::max(max_jump_norm_, l2_norm(z));
        max_jump_linf_ = std::max(max_jump_linf_, linf_norm(z));
        if (zero < z) half_jumps_[z] = a;
        cumulative_.emplace_back(z, 0.0);
    }
    double acc = 0;
    for (auto& [z, c] : cumulative_) {
        acc += jumps_.at(z);
        c = acc;
    }
}

double RateKernel::rate(const LatticePoint& z) const {
    auto it = jumps_.find(z);
    return it == jumps_.end() ? 0.0 : it->second;
}

void Trajectory::validate(const RateKernel& kernel) const {
    if (int(start.size()) != kernel.dim())
        throw std::invalid_argument("Trajectory: start dimension mismatch");
    if (!(horizon > 0)) throw std::invalid_argument("Trajectory: horizon must be > 0");
    if (jump_times.size() != jump_targets.size())
        throw std::invalid_argument("Trajectory: times/targets length mismatch");
    const LatticePoint* prev = &start;
    double last = 0;
    for (std::size_t i = 0; i < jump_times.size(); ++i) {
        if (!(jump_times[i] > last) || !(jump_times[i] <= horizon))
            throw std::invalid_argument("Trajectory: jump times must increase within (0, horizon]");
        last = jump_times[i];
        if (kernel.rate(sub(jump_targets[i], *prev)) == 0)
            throw std::invalid_argument("Trajectory: displacement outside kernel support");
        prev = &jump_targets[i];
    }
}

namespace {

// Poisson-Chernoff certificate for the confinement assumption: with
// u_t = e * Rmax * lambda * t * ln(e + t), the jump count N_t dominates the
// range, and P(N_t >= m) <= exp(-lambda t) (e lambda t / m)^m gives
// (1/t) log P(sup_s |X_s| >= u_t) <= -lambda (1 + e ln(e+t) ln ln(e+t)).
double chernoff_exponent_per_t(double lambda, double t) {
    double loge = std::log(std::exp(1.0) + t);
    return -lambda * (1.0 + std::exp(1.0) * loge * std::log(loge));
}

}  // namespace

AssumptionReport check_assumptions(const RateKernel& kernel) {
    AssumptionReport rep;
    rep.total_rate = kernel.total_rate();
    rep.symmetric = true;  // construction rejects asymmetric kernels

    // A3: the jumps generate Z^d as a group iff the integer column span of the
    // jump matrix is unimodular. Reduce to column Hermite form with exact
    // 64-bit arithmetic (jump coordinates are small).
    const int d = kernel.dim();
    std::vector<LatticePoint> cols;
    for (const auto& [z, a] : kernel.half_jumps()) cols.push_back(z);
    std::int64_t det = 1;
    int rank = 0;
    for (int row = 0; row < d && !cols.empty(); ++row) {
        // Euclid across columns until one pivot survives in this row.
        for (;;) {
            std::size_t piv = cols.size();
            for (std::size_t j = 0; j < cols.size(); ++j) {
                std::int64_t v = std::llabs(cols[j][std::size_t(row)]);
                if (v != 0 && (piv == cols.size() ||
                               v < std::llabs(cols[piv][std::size_t(row)])))
                    piv = j;
            }
            if (piv == cols.size()) break;  // row is all zero
            std::swap(cols[piv], cols[0]);
            bool reduced = true;
            for (std::size_t j = 1; j < cols.size(); ++j) {
                std::int64_t q = cols[j][std::size_t(row)] / cols[0][std::size_t(row)];
                if (q != 0)
                    for (int i = 0; i < d; ++i)
                        cols[j][std::size_t(i)] -= q * cols[0][std::size_t(i)];
                if (cols[j][std::size_t(row)] != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (!cols.empty() && cols[0][std::size_t(row)] != 0) {
            det *= cols[0][std::size_t(row)];
            ++rank;
            cols.erase(cols.begin());
        }
    }
    rep.irreducible = (rank == d) && (det == 1 || det == -1);

    rep.confinement_bound =
        "u_t = e*Rmax*lambda*t*ln(e+t); Poisson tail P(N_t>=m) <= exp(-lambda t)(e lambda t/m)^m";
    const double t_grid[3] = {1.0, 10.0, 100.0};
    for (int i = 0; i < 3; ++i)
        rep.chernoff_exponent_per_t[std::size_t(i)] =
            chernoff_exponent_per_t(kernel.total_rate(), t_grid[i]);
    return rep;
}

double apply_generator(const RateKernel& kernel, const SiteFunction& f, const LatticePoint& x) {
    require_dim(x, std::size_t(kernel.dim()), "apply_generator");
    auto value = [&f](const LatticePoint& p) {
        auto it = f.find(p);
        return it == f.end() ? 0.0 : it->second;
    };
    double fx = value(x);
    double out = 0;
    for (const auto& [z, a] : kernel.jumps()) out += a * (value(add(x, z)) - fx);
    return out;
}

Trajectory simulate(const RateKernel& kernel, double horizon, const LatticePoint& start,
                    std::uint64_t seed, std::uint64_t stream) {
    if (!(horizon > 0)) throw std::invalid_argument("simulate: horizon must be > 0");
    require_dim(start, std::size_t(kernel.dim()), "simulate");

    CounterRng rng(seed, stream);
    Trajectory traj;
    traj.start = start;
    traj.horizon = horizon;
    const double lambda = kernel.total_rate();
    const auto& cumulative = kernel.cumulative();

    double t = 0;
    LatticePoint site = start;
    for (;;) {
        t += rng.next_exponential(lambda);
        if (!(t <= horizon)) break;
        if (!traj.jump_times.empty() && t <= traj.jump_times.back())
            t = std::nextafter(traj.jump_times.back(), horizon + 1.0);
        if (t > horizon) break;
        double u = rng.next_unit() * lambda;
        auto it = std::lower_bound(
            cumulative.begin(), cumulative.end(), u,
            [](const std::pair<LatticePoint, double>& e, double v) { return e.second < v; });
        if (it == cumulative.end()) --it;
        site = add(site, it->first);
        traj.jump_times.push_back(t);
        traj.jump_targets.push_back(site);
    }
    return traj;
}

SparseMeasure occupation_measure(const Trajectory& traj) {
    if (!(traj.horizon > 0)) throw std::invalid_argument("occupation_measure: bad horizon");
    std::map<LatticePoint, double> tally;
    double prev = 0;
    const LatticePoint* site = &traj.start;
    for (std::size_t i = 0; i < traj.jump_times.size(); ++i) {
        tally[*site] += (traj.jump_times[i] - prev) / traj.horizon;
        prev = traj.jump_times[i];
        site = &traj.jump_targets[i];
    }
    tally[*site] += (traj.horizon - prev) / traj.horizon;
    return SparseMeasure(int(traj.start.size()), std::move(tally));
}

double max_displacement(const Trajectory& traj) {
    double best = 0;
    for (const auto& x : traj.jump_targets) best = std::max(best, l2_norm(sub(x, traj.start)));
    return best;
}

}  // namespace ldrw
