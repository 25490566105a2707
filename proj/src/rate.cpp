#include "ldrw/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldrw {

double dirichlet_energy(const RateKernel& kernel, const SparseMeasure& mu) {
    if (kernel.dim() != mu.dim()) throw std::invalid_argument("dirichlet_energy: dimension mismatch");
    double energy = 0;
    for (const auto& [x, w] : mu.entries()) {
        double sx = std::sqrt(w);
        for (const auto& [z, a] : kernel.half_jumps()) {
            // Edge {x, x+z} exactly once; edge {x-z, x} only when x-z carries
            // no mass (otherwise it is {x', x'+z} for x' = x-z).
            double d1 = sx - std::sqrt(mu.at(add(x, z)));
            energy += a * d1 * d1;
            if (mu.at(sub(x, z)) == 0) energy += a * w;
        }
    }
    return energy;
}

double dirichlet_energy(const RateKernel& kernel, const CompactPoint& xi) {
    double total = 0;
    for (const auto& orbit : xi.orbits()) total += dirichlet_energy(kernel, orbit.representative());
    return total;
}

double dirichlet_sum_ordered(const RateKernel& kernel, const SparseMeasure& mu) {
    return 2.0 * dirichlet_energy(kernel, mu);
}

double dual_form_value(const RateKernel& kernel, const DualPotential& u, const SparseMeasure& mu) {
    if (!(u.floor > 0)) throw std::invalid_argument("dual_form_value: floor must be > 0");
    auto bump_at = [&u](const LatticePoint& p) {
        auto it = u.bump.find(p);
        return it == u.bump.end() ? 0.0 : it->second;
    };
    double total = 0;
    for (const auto& [x, w] : mu.entries()) {
        double vx = bump_at(x);
        double numerator = 0;  // (-L u)(x); the floor cancels in differences
        for (const auto& [z, a] : kernel.jumps()) numerator += a * (vx - bump_at(add(x, z)));
        total += w * numerator / (u.floor + vx);
    }
    return total;
}

namespace {

std::pair<LatticePoint, LatticePoint> bounding_box(const SparseMeasure& mu) {
    auto lo = mu.entries().begin()->first;
    auto hi = lo;
    for (const auto& [x, w] : mu.entries())
        for (std::size_t k = 0; k < x.size(); ++k) {
            lo[k] = std::min(lo[k], x[k]);
            hi[k] = std::max(hi[k], x[k]);
        }
    return {lo, hi};
}

}  // namespace

DualBound dual_lower_bound(const RateKernel& kernel, const SparseMeasure& mu,
                           std::int64_t box_radius, int sweeps) {
    if (kernel.dim() != mu.dim()) throw std::invalid_argument("dual_lower_bound: dimension mismatch");
    if (mu.empty()) throw std::invalid_argument("dual_lower_bound: empty measure");
    if (sweeps < 1) sweeps = 1;
    const int d = kernel.dim();

    auto [lo, hi] = bounding_box(mu);
    LatticePoint box_lo(std::size_t(d), 0), box_hi(std::size_t(d), 0);
    for (int k = 0; k < d; ++k) {
        std::int64_t mid = (lo[std::size_t(k)] + hi[std::size_t(k)]) / 2;
        box_lo[std::size_t(k)] = mid - box_radius;
        box_hi[std::size_t(k)] = mid + box_radius;
        if (lo[std::size_t(k)] < box_lo[std::size_t(k)] || hi[std::size_t(k)] > box_hi[std::size_t(k)])
            throw std::invalid_argument("dual_lower_bound: box does not cover the support");
    }

    std::vector<LatticePoint> sites;
    LatticePoint p = box_lo;
    for (;;) {
        sites.push_back(p);
        int axis = d - 1;
        while (axis >= 0 && p[std::size_t(axis)] == box_hi[std::size_t(axis)]) {
            p[std::size_t(axis)] = box_lo[std::size_t(axis)];
            --axis;
        }
        if (axis < 0) break;
        ++p[std::size_t(axis)];
    }

    SiteFunction bump;
    for (const auto& [x, w] : mu.entries()) bump[x] = std::sqrt(w);
    auto bump_at = [&bump](const LatticePoint& q) {
        auto it = bump.find(q);
        return it == bump.end() ? 0.0 : it->second;
    };

    const double lambda = kernel.total_rate();
    const double cap = 1e12;
    double best = dual_form_value(kernel, DualPotential{1.0, bump}, mu);

    double floor = 1.0;
    for (int stage = 0; stage < 40; ++stage, floor *= 0.5) {
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            for (const auto& w : sites) {
                // Exact maximizer of the dual form in the single coordinate
                // v(w): with S = sum_z a(z) v(w+z) and
                // T = sum_z a(z) mu(w+z)/(floor + v(w+z)), the optimum is
                // sqrt(mu(w)(lambda*floor + S)/T) - floor.
                double s = 0, tt = 0;
                for (const auto& [z, a] : kernel.jumps()) {
                    LatticePoint q = add(w, z);
                    double vq = bump_at(q);
                    s += a * vq;
                    double mq = mu.at(q);
                    if (mq > 0) tt += a * mq / (floor + vq);
                }
                double mw = mu.at(w);
                double t;
                if (tt <= 0)
                    t = mw > 0 ? cap : 0.0;
                else
                    t = std::max(0.0, std::sqrt(mw * (lambda * floor + s) / tt) - floor);
                if (t > 0)
                    bump[w] = t;
                else
                    bump.erase(w);
            }
        }
        best = std::max(best, dual_form_value(kernel, DualPotential{floor, bump}, mu));
    }
    double energy = dirichlet_energy(kernel, mu);
    return DualBound{best, energy - best};
}

namespace {

double best_shift_value(const RateKernel& kernel, double floor, const SiteFunction& bump,
                        const SparseMeasure& rep) {
    // g(x) = (-L u)(x)/(floor + bump(x)) is supported on supp(bump) + jumps;
    // the value at shift b is sum_y rep(y) g(y - b), so only b in
    // supp(rep) - supp(g) can be nonzero, and fully separated shifts give 0.
    const int d = kernel.dim();
    auto bump_at = [&bump](const LatticePoint& p) {
        auto it = bump.find(p);
        return it == bump.end() ? 0.0 : it->second;
    };
    auto g = [&](const LatticePoint& x) {
        double vx = bump_at(x);
        double numerator = 0;
        for (const auto& [z, a] : kernel.jumps()) numerator += a * (vx - bump_at(add(x, z)));
        return numerator / (floor + vx);
    };

    if (bump.empty()) return 0.0;
    LatticePoint glo = bump.begin()->first, ghi = glo;
    for (const auto& [x, v] : bump)
        for (int k = 0; k < d; ++k) {
            glo[std::size_t(k)] = std::min(glo[std::size_t(k)], x[std::size_t(k)]);
            ghi[std::size_t(k)] = std::max(ghi[std::size_t(k)], x[std::size_t(k)]);
        }
    std::int64_t reach = kernel.max_jump_linf();
    for (int k = 0; k < d; ++k) {
        glo[std::size_t(k)] -= reach;
        ghi[std::size_t(k)] += reach;
    }
    auto [rlo, rhi] = bounding_box(rep);

    double best = 0.0;  // fully separated shifts contribute exactly zero
    LatticePoint b(std::size_t(d), 0);
    for (int k = 0; k < d; ++k) b[std::size_t(k)] = rlo[std::size_t(k)] - ghi[std::size_t(k)];
    for (;;) {
        double value = 0;
        for (const auto& [y, wy] : rep.entries()) value += wy * g(sub(y, b));
        best = std::max(best, value);
        int axis = d - 1;
        while (axis >= 0 &&
               b[std::size_t(axis)] == rhi[std::size_t(axis)] - glo[std::size_t(axis)]) {
            b[std::size_t(axis)] = rlo[std::size_t(axis)] - ghi[std::size_t(axis)];
            --axis;
        }
        if (axis < 0) break;
        ++b[std::size_t(axis)];
    }
    return best;
}

}  // namespace

double multi_orbit_dual_value(const RateKernel& kernel, const CompactPoint& xi, double floor,
                              const std::vector<SiteFunction>& bumps) {
    if (!(floor > 0)) throw std::invalid_argument("multi_orbit_dual_value: floor must be > 0");
    if (kernel.dim() != xi.dim())
        throw std::invalid_argument("multi_orbit_dual_value: dimension mismatch");
    const std::size_t k = bumps.size();
    const std::size_t m = xi.orbits().size();
    if (k > m)
        throw std::invalid_argument("multi_orbit_dual_value: more potentials than orbits");
    if (k == 0) return 0.0;

    std::vector<std::vector<double>> score(k, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < m; ++j)
            score[i][j] = best_shift_value(kernel, floor, bumps[i],
                                           xi.orbits()[j].representative());

    // Best assignment of potentials to distinct orbits; sizes are tiny so
    // depth-first search over orbit subsets is enough.
    double best = -std::numeric_limits<double>::infinity();
    std::vector<bool> used(m, false);
    auto dfs = [&](auto&& self, std::size_t i, double acc) -> void {
        if (i == k) {
            best = std::max(best, acc);
            return;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j]) continue;
            used[j] = true;
            self(self, i + 1, acc + score[i][j]);
            used[j] = false;
        }
    };
    dfs(dfs, 0, 0.0);
    return best;
}

}  // namespace ldrw
