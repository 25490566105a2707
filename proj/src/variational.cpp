#include "ldrw/variational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "ldrw/decompose.hpp"
#include "ldrw/rate.hpp"
#include "ldrw/rng.hpp"
#include "ldrw/util.hpp"

namespace ldrw {

DifferencePotential::DifferencePotential(int dim, const SiteFunction& values) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("DifferencePotential: dim must be >= 1");
    for (const auto& [z, v] : values) {
        if (int(z.size()) != dim)
            throw std::invalid_argument("DifferencePotential: offset dimension mismatch");
        if (!(v >= 0) || !std::isfinite(v))
            throw std::invalid_argument("DifferencePotential: values must be finite and >= 0");
        if (v == 0) continue;
        LatticePoint mz = negate(z);
        auto it = values.find(mz);
        if (it != values.end() && it->second != v)
            throw std::invalid_argument("DifferencePotential: asymmetric values for " + to_string(z));
        values_[z] = v;
        values_[mz] = v;
    }
    double v0 = peak();
    for (const auto& [z, v] : values_)
        if (v > v0)
            throw std::invalid_argument("DifferencePotential: maximum must be at the origin");
}

double DifferencePotential::at(const LatticePoint& z) const {
    auto it = values_.find(z);
    return it == values_.end() ? 0.0 : it->second;
}

double DifferencePotential::peak() const { return at(origin(dim_)); }

std::int64_t DifferencePotential::reach() const {
    std::int64_t r = 0;
    for (const auto& [z, v] : values_) r = std::max(r, linf_norm(z));
    return r;
}

std::int64_t DifferencePotential::l1_diameter() const {
    std::int64_t r = 0;
    for (const auto& [za, va] : values_)
        for (const auto& [zb, vb] : values_) r = std::max(r, l1_norm(sub(za, zb)));
    return r;
}

double interaction_energy(const DifferencePotential& v, const SparseMeasure& mu) {
    if (v.dim() != mu.dim()) throw std::invalid_argument("interaction_energy: dimension mismatch");
    double total = 0;
    for (const auto& [x, wx] : mu.entries()) {
        double conv = 0;
        for (const auto& [z, vz] : v.values()) conv += vz * mu.at(add(x, z));
        total += wx * conv;
    }
    return total;
}

namespace {

// Sites of [-radius, radius]^d in lexicographic order with jump adjacency,
// the discrete playground for all box-restricted optimizations.
struct Box {
    int dim;
    std::int64_t radius;
    std::vector<LatticePoint> sites;
    std::map<LatticePoint, int> index;
    std::vector<std::vector<std::pair<int, double>>> neighbors;  // in-box jumps
    std::vector<char> boundary;
    double lambda;

    Box(const RateKernel& kernel, std::int64_t r) : dim(kernel.dim()), radius(r) {
        if (r < 0) throw std::invalid_argument("box radius must be >= 0");
        lambda = kernel.total_rate();
        LatticePoint p(std::size_t(dim), -r);
        for (;;) {
            index.emplace(p, int(sites.size()));
            sites.push_back(p);
            int axis = dim - 1;
            while (axis >= 0 && p[std::size_t(axis)] == r) {
                p[std::size_t(axis)] = -r;
                --axis;
            }
            if (axis < 0) break;
            ++p[std::size_t(axis)];
        }
        neighbors.resize(sites.size());
        boundary.resize(sites.size(), 0);
        for (std::size_t i = 0; i < sites.size(); ++i) {
            boundary[i] = linf_norm(sites[i]) == r ? 1 : 0;
            for (const auto& [z, a] : kernel.jumps()) {
                auto it = index.find(add(sites[i], z));
                if (it != index.end()) neighbors[i].emplace_back(it->second, a);
            }
        }
    }

    std::size_t size() const { return sites.size(); }

    int origin_index() const { return index.at(origin(dim)); }

    // (-L phi)_i with phi extended by zero off the box.
    void apply_neg_generator(const std::vector<double>& phi, std::vector<double>& out) const {
        for (std::size_t i = 0; i < size(); ++i) {
            double acc = lambda * phi[i];
            for (const auto& [j, a] : neighbors[i]) acc -= a * phi[std::size_t(j)];
            out[i] = acc;
        }
    }

    double dirichlet_quadratic(const std::vector<double>& phi) const {
        double total = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            double acc = lambda * phi[i];
            for (const auto& [j, a] : neighbors[i]) acc -= a * phi[std::size_t(j)];
            total += phi[i] * acc;
        }
        return total;
    }

    SparseMeasure measure_from_phi(const std::vector<double>& phi) const {
        std::map<LatticePoint, double> e;
        for (std::size_t i = 0; i < size(); ++i)
            if (phi[i] != 0) e.emplace(sites[i], phi[i] * phi[i]);
        return SparseMeasure(dim, std::move(e));
    }

    double boundary_mass(const std::vector<double>& phi) const {
        double m = 0;
        for (std::size_t i = 0; i < size(); ++i)
            if (boundary[i]) m += phi[i] * phi[i];
        return m;
    }
};

void project_sphere_cone(std::vector<double>& phi) {
    double norm2 = 0;
    for (auto& x : phi) {
        if (x < 0) x = 0;
        norm2 += x * x;
    }
    if (norm2 == 0) return;  // caller keeps the previous iterate
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : phi) x *= inv;
}

struct PgOutcome {
    std::vector<double> phi;
    double value = -std::numeric_limits<double>::infinity();
    double kkt_norm = 0;
    bool converged = false;
};

constexpr int kMaxIterations = 50000;
constexpr double kGradTol = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;

PgOutcome maximize_on_sphere(const std::function<double(const std::vector<double>&)>& value,
                             const std::function<void(const std::vector<double>&,
                                                      std::vector<double>&)>& gradient,
                             std::vector<double> start) {
    const std::size_t n = start.size();
    project_sphere_cone(start);
    PgOutcome out;
    out.phi = std::move(start);
    out.value = value(out.phi);

    std::vector<double> grad(n), residual(n), cand(n);
    double eta = 1.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        gradient(out.phi, grad);
        double radial = 0;
        for (std::size_t i = 0; i < n; ++i) radial += grad[i] * out.phi[i];
        double rn2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = grad[i] - radial * out.phi[i];
            if (out.phi[i] == 0 && r < 0) r = 0;  // bound already active
            residual[i] = r;
            rn2 += r * r;
        }
        out.kkt_norm = std::sqrt(rn2);
        if (out.kkt_norm <= kGradTol) {
            out.converged = true;
            return out;
        }
        eta = std::min(eta * 2.0, 1e6);
        bool accepted = false;
        while (eta >= 1e-18) {
            for (std::size_t i = 0; i < n; ++i) cand[i] = out.phi[i] + eta * grad[i];
            project_sphere_cone(cand);
            double cv = value(cand);
            if (cv >= out.value + kArmijo * eta * rn2) {
                out.phi = cand;
                out.value = cv;
                accepted = true;
                break;
            }
            eta *= kShrink;
        }
        if (!accepted) return out;  // stalled at floating-point resolution
    }
    return out;
}

std::vector<double> random_start(std::size_t n, CounterRng& rng) {
    std::vector<double> phi(n);
    for (auto& x : phi) x = std::fabs(rng.next_normal());
    return phi;
}

VariationalSolution best_of_starts(
    const Box& box, const std::function<double(const std::vector<double>&)>& value,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& gradient,
    int n_starts, std::uint64_t seed, int threads, bool include_uniform) {
    const std::size_t n = box.size();
    std::vector<std::vector<double>> starts;
    std::vector<double> delta(n, 0.0);
    delta[std::size_t(box.origin_index())] = 1.0;
    starts.push_back(std::move(delta));
    if (include_uniform) starts.emplace_back(n, 1.0 / std::sqrt(double(n)));
    for (int s = 0; s < n_starts; ++s) {
        CounterRng rng(seed, std::uint64_t(s) + 1);
        starts.push_back(random_start(n, rng));
    }

    std::vector<PgOutcome> outcomes(starts.size());
    parallel_for(starts.size(), threads, [&](std::size_t i) {
        outcomes[i] = maximize_on_sphere(value, gradient, starts[i]);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
        if (outcomes[i].value > outcomes[best].value ||
            (outcomes[i].value == outcomes[best].value && outcomes[i].phi < outcomes[best].phi))
            best = i;
    }
    const PgOutcome& win = outcomes[best];
    VariationalSolution sol;
    sol.value = win.value;
    sol.maximizer = box.measure_from_phi(win.phi);
    sol.box_radius = box.radius;
    sol.starts_used = int(starts.size());
    sol.gradient_norm = win.kkt_norm;
    sol.boundary_mass = box.boundary_mass(win.phi);
    sol.converged = win.converged;
    return sol;
}

void check_site_potential(const SiteFunction& v, const Box& box) {
    for (const auto& [x, val] : v) {
        if (int(x.size()) != box.dim)
            throw std::invalid_argument("site potential: dimension mismatch");
        if (!std::isfinite(val)) throw std::invalid_argument("site potential: non-finite value");
        if (val != 0 && !box.index.count(x))
            throw std::invalid_argument("site potential: support outside the box");
    }
}

}  // namespace

VariationalSolution solve_linear_tilt(const RateKernel& kernel, const SiteFunction& v,
                                      std::int64_t box_radius) {
    Box box(kernel, box_radius);
    check_site_potential(v, box);
    const std::size_t n = box.size();
    std::vector<double> diag(n, -kernel.total_rate());
    for (const auto& [x, val] : v) {
        auto it = box.index.find(x);
        if (it != box.index.end()) diag[std::size_t(it->second)] += val;
    }

    std::vector<double> phi(n);
    double value;
    if (n <= 1024) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
        for (std::size_t i = 0; i < n; ++i) {
            h(Eigen::Index(i), Eigen::Index(i)) = diag[i];
            for (const auto& [j, a] : box.neighbors[i]) h(Eigen::Index(i), Eigen::Index(j)) += a;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("solve_linear_tilt: eigensolver failed");
        Eigen::Index top = Eigen::Index(n) - 1;
        value = solver.eigenvalues()(top);
        Eigen::VectorXd vec = solver.eigenvectors().col(top);
        if (vec.sum() < 0) vec = -vec;
        for (std::size_t i = 0; i < n; ++i) phi[i] = std::fabs(vec(Eigen::Index(i)));
    } else {
        // Shifted power iteration: H + 2*lambda*I is elementwise nonnegative
        // and irreducible on the box, so iteration from a positive vector
        // converges to the Perron pair.
        const double shift = 2.0 * kernel.total_rate();
        std::vector<double> x(n, 1.0 / std::sqrt(double(n))), y(n);
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = (diag[i] + shift) * in[i];
                for (const auto& [j, a] : box.neighbors[i]) acc += a * in[std::size_t(j)];
                out[i] = acc;
            }
        };
        double rho = 0;
        for (int iter = 0; iter < 200000; ++iter) {
            apply(x, y);
            double norm = 0;
            for (double t : y) norm += t * t;
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
            if (iter % 8 == 7) {
                apply(x, y);
                rho = 0;
                for (std::size_t i = 0; i < n; ++i) rho += x[i] * y[i];
                double res = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    double r = y[i] - rho * x[i];
                    res += r * r;
                }
                if (std::sqrt(res) <= 1e-13 * std::max(1.0, std::fabs(rho))) break;
            }
        }
        value = rho - shift;
        phi = x;
    }

    double norm = 0;
    for (double t : phi) norm += t * t;
    norm = std::sqrt(norm);
    for (auto& t : phi) t /= norm;

    VariationalSolution sol;
    sol.value = value;
    sol.maximizer = box.measure_from_phi(phi);
    sol.box_radius = box_radius;
    sol.starts_used = 1;
    std::vector<double> hphi(n);
    box.apply_neg_generator(phi, hphi);
    double res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (diag[i] + kernel.total_rate()) * phi[i] - hphi[i] - value * phi[i];
        res += r * r;
    }
    sol.gradient_norm = std::sqrt(res);
    sol.boundary_mass = box.boundary_mass(phi);
    sol.converged = true;
    return sol;
}

VariationalSolution solve_linear_tilt_gradient(const RateKernel& kernel, const SiteFunction& v,
                                               std::int64_t box_radius, int n_starts,
                                               std::uint64_t seed, int threads) {
    Box box(kernel, box_radius);
    check_site_potential(v, box);
    const std::size_t n = box.size();
    std::vector<double> site_v(n, 0.0);
    for (const auto& [x, val] : v) {
        auto it = box.index.find(x);
        if (it != box.index.end()) site_v[std::size_t(it->second)] = val;
    }

    auto value = [&box, &site_v, n](const std::vector<double>& phi) {
        double tilt = 0;
        for (std::size_t i = 0; i < n; ++i) tilt += site_v[i] * phi[i] * phi[i];
        return tilt - box.dirichlet_quadratic(phi);
    };
    auto gradient = [&box, &site_v, n](const std::vector<double>& phi, std::vector<double>& g) {
        box.apply_neg_generator(phi, g);
        for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * site_v[i] * phi[i] - 2.0 * g[i];
    };
    return best_of_starts(box, value, gradient, n_starts, seed, threads, true);
}

namespace {

VariationalSolution quadratic_tilt_impl(const RateKernel& kernel, const DifferencePotential& v,
                                        std::int64_t box_radius, int n_starts, std::uint64_t seed,
                                        int threads) {
    Box box(kernel, box_radius);
    if (v.reach() > box_radius)
        throw std::invalid_argument("solve_quadratic_tilt: potential support exceeds the box");
    const std::size_t n = box.size();

    // Offsets resolved to index shifts once; the convolution is then a few
    // table lookups per site.
    std::vector<std::pair<std::vector<int>, double>> stencil;
    for (const auto& [z, val] : v.values()) {
        std::vector<int> to(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = box.index.find(add(box.sites[i], z));
            if (it != box.index.end()) to[i] = it->second;
        }
        stencil.emplace_back(std::move(to), val);
    }

    auto convolve = [&stencil, n](const std::vector<double>& mu, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (const auto& [to, val] : stencil)
            for (std::size_t i = 0; i < n; ++i)
                if (to[i] >= 0) out[i] += val * mu[std::size_t(to[i])];
    };

    auto value = [&box, &convolve, n](const std::vector<double>& phi) {
        std::vector<double> mu(n), conv(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = phi[i] * phi[i];
        convolve(mu, conv);
        double lam = 0;
        for (std::size_t i = 0; i < n; ++i) lam += mu[i] * conv[i];
        return lam - box.dirichlet_quadratic(phi);
    };
    auto gradient = [&box, &convolve, n](const std::vector<double>& phi, std::vector<double>& g) {
        std::vector<double> mu(n), conv(n);
        for (std::size_t i = 0; i < n; ++i) mu[i] = phi[i] * phi[i];
        convolve(mu, conv);
        box.apply_neg_generator(phi, g);
        for (std::size_t i = 0; i < n; ++i) g[i] = 4.0 * conv[i] * phi[i] - 2.0 * g[i];
    };
    return best_of_starts(box, value, gradient, n_starts, seed, threads, false);
}

}  // namespace

VariationalSolution solve_quadratic_tilt(const RateKernel& kernel, const DifferencePotential& v,
                                         std::int64_t box_radius, int n_starts, std::uint64_t seed,
                                         int threads) {
    if (kernel.dim() != v.dim())
        throw std::invalid_argument("solve_quadratic_tilt: dimension mismatch");
    if (!(v.peak() > kernel.total_rate()))
        throw std::invalid_argument(
            "solve_quadratic_tilt: requires V(0) > total jump rate");
    return quadratic_tilt_impl(kernel, v, box_radius, n_starts, seed, threads);
}

std::vector<CurvePoint> intersection_rate_curve(const RateKernel& kernel,
                                                const std::vector<double>& theta_grid,
                                                std::int64_t box_radius, int threads) {
    for (double theta : theta_grid)
        if (!(theta >= 0)) throw std::invalid_argument("intersection_rate_curve: theta must be >= 0");
    std::vector<CurvePoint> out(theta_grid.size());
    parallel_for(theta_grid.size(), threads, [&](std::size_t i) {
        SiteFunction vmap;
        vmap[origin(kernel.dim())] = theta_grid[i];
        DifferencePotential v(kernel.dim(), vmap);
        VariationalSolution sol =
            quadratic_tilt_impl(kernel, v, box_radius, 4, 0x11c0ffee, 1);
        double y = 0;
        for (const auto& [x, w] : sol.maximizer.entries()) y += w * w;
        out[i] = CurvePoint{theta_grid[i], y, dirichlet_energy(kernel, sol.maximizer)};
    });
    return out;
}

MaximizerReport check_maximizer_properties(const RateKernel& kernel, const DifferencePotential& v,
                                           const SparseMeasure& candidate) {
    MaximizerReport rep;
    rep.mass = candidate.mass();
    rep.is_probability = std::fabs(rep.mass - 1.0) <= 1e-8;

    Decomposition dec = cluster_decompose(candidate, v.l1_diameter() + 1, 1e-6);
    rep.piece_count = int(dec.pieces.size());
    rep.single_piece = rep.piece_count == 1;

    if (rep.piece_count >= 2 && v.peak() > 0) {
        const SparseMeasure& p1 = dec.pieces[0];
        const SparseMeasure& p2 = dec.pieces[1];
        // Overlap the two largest pieces so the cross-interaction is positive,
        // then compare the merged objective against keeping them apart.
        const LatticePoint& p1_hi = p1.entries().rbegin()->first;
        const LatticePoint& p2_lo = p2.entries().begin()->first;
        SparseMeasure moved = p2.shifted(sub(p1_hi, p2_lo));
        SparseMeasure merged = add(p1, moved);
        double separate = interaction_energy(v, p1) - dirichlet_energy(kernel, p1) +
                          interaction_energy(v, p2) - dirichlet_energy(kernel, p2);
        double together = interaction_energy(v, merged) - dirichlet_energy(kernel, merged);
        rep.merge_checked = true;
        rep.merge_gain = together - separate;
    }
    return rep;
}

}  // namespace ldrw
