#include "ldrw/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldrw {

namespace {

void validate_weights(const std::map<LatticePoint, double>& entries, int dim) {
    for (const auto& [x, w] : entries) {
        if (int(x.size()) != dim)
            throw std::invalid_argument("SparseMeasure: entry dimension mismatch");
        if (!(w >= 0) || !std::isfinite(w))
            throw std::invalid_argument("SparseMeasure: weights must be finite and nonnegative");
    }
}

}  // namespace

SparseMeasure::SparseMeasure(int dim) : dim_(dim), mass_(0) {
    if (dim < 1) throw std::invalid_argument("SparseMeasure: dim must be >= 1");
}

SparseMeasure::SparseMeasure(int dim, std::map<LatticePoint, double> entries) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SparseMeasure: dim must be >= 1");
    validate_weights(entries, dim);
    for (auto it = entries.begin(); it != entries.end();) {
        if (it->second < kWeightFloor)
            it = entries.erase(it);
        else
            ++it;
    }
    entries_ = std::move(entries);
    mass_ = 0;
    for (const auto& [x, w] : entries_) mass_ += w;
    if (mass_ > 1.0 + kMassSlack)
        throw std::invalid_argument("SparseMeasure: total mass exceeds 1");
}

double SparseMeasure::at(const LatticePoint& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0.0 : it->second;
}

SparseMeasure SparseMeasure::shifted(const LatticePoint& by) const {
    require_dim(by, std::size_t(dim_), "shift");
    std::map<LatticePoint, double> out;
    auto hint = out.end();
    // Adding a constant preserves lexicographic order, so the hint insert is
    // linear and the entry order (hence later summation order) is unchanged.
    for (const auto& [x, w] : entries_) hint = out.emplace_hint(hint, add(x, by), w);
    SparseMeasure r(dim_);
    r.entries_ = std::move(out);
    r.mass_ = mass_;
    return r;
}

SparseMeasure SparseMeasure::pruned(double eps) const {
    if (eps < 0) throw std::invalid_argument("prune: eps must be >= 0");
    std::map<LatticePoint, double> out;
    for (const auto& [x, w] : entries_)
        if (w >= eps) out.emplace(x, w);
    return SparseMeasure(dim_, std::move(out));
}

SparseMeasure SparseMeasure::scaled(double factor) const {
    if (!(factor >= 0)) throw std::invalid_argument("scale: factor must be >= 0");
    std::map<LatticePoint, double> out;
    for (const auto& [x, w] : entries_) out.emplace(x, w * factor);
    return SparseMeasure(dim_, std::move(out));
}

SparseMeasure point_mass(const LatticePoint& x, double weight) {
    std::map<LatticePoint, double> e;
    e.emplace(x, weight);
    return SparseMeasure(int(x.size()), std::move(e));
}

SparseMeasure uniform_box(int dim, std::int64_t n, double total_mass) {
    if (n < 0) throw std::invalid_argument("uniform_box: n must be >= 0");
    double count = std::pow(double(2 * n + 1), dim);
    double w = total_mass / count;
    std::map<LatticePoint, double> e;
    LatticePoint p(std::size_t(dim), -n);
    for (;;) {
        e.emplace(p, w);
        int axis = dim - 1;
        while (axis >= 0 && p[std::size_t(axis)] == n) {
            p[std::size_t(axis)] = -n;
            --axis;
        }
        if (axis < 0) break;
        ++p[std::size_t(axis)];
    }
    return SparseMeasure(dim, std::move(e));
}

SparseMeasure uniform_on(int dim, const std::vector<LatticePoint>& sites, double total_mass) {
    if (sites.empty()) throw std::invalid_argument("uniform_on: no sites");
    std::map<LatticePoint, double> e;
    double w = total_mass / double(sites.size());
    for (const auto& s : sites) {
        if (!e.emplace(s, w).second) throw std::invalid_argument("uniform_on: duplicate site");
    }
    return SparseMeasure(dim, std::move(e));
}

SparseMeasure add(const SparseMeasure& a, const SparseMeasure& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("add: dimension mismatch");
    std::map<LatticePoint, double> e = a.entries();
    for (const auto& [x, w] : b.entries()) e[x] += w;
    return SparseMeasure(a.dim(), std::move(e));
}

Orbit::Orbit(const SparseMeasure& mu) : rep_(mu.dim()) {
    if (mu.empty()) throw std::invalid_argument("Orbit: empty measure has no orbit");
    const LatticePoint& anchor = mu.entries().begin()->first;
    rep_ = mu.shifted(negate(anchor));
}

bool operator<(const Orbit& a, const Orbit& b) {
    if (a.mass() != b.mass()) return a.mass() > b.mass();
    const auto& ea = a.rep_.entries();
    const auto& eb = b.rep_.entries();
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

CompactPoint::CompactPoint(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("CompactPoint: dim must be >= 1");
}

CompactPoint::CompactPoint(int dim, std::vector<Orbit> orbits) : dim_(dim), orbits_(std::move(orbits)) {
    if (dim < 1) throw std::invalid_argument("CompactPoint: dim must be >= 1");
    double total = 0;
    for (const auto& o : orbits_) {
        if (o.representative().dim() != dim)
            throw std::invalid_argument("CompactPoint: orbit dimension mismatch");
        total += o.mass();
    }
    if (total > 1.0 + SparseMeasure::kMassSlack)
        throw std::invalid_argument("CompactPoint: total mass exceeds 1");
    std::sort(orbits_.begin(), orbits_.end());
}

double CompactPoint::total_mass() const {
    double total = 0;
    for (const auto& o : orbits_) total += o.mass();
    return total;
}

SparseMeasure approximating_measure(const CompactPoint& xi, std::int64_t n, std::int64_t spacing) {
    if (n < 1 || spacing < 1)
        throw std::invalid_argument("approximating_measure: n and spacing must be >= 1");
    const int dim = xi.dim();

    std::int64_t max_diam = 0;
    for (const auto& o : xi.orbits()) {
        const auto& e = o.representative().entries();
        LatticePoint lo = e.begin()->first, hi = lo;
        for (const auto& [x, w] : e)
            for (int k = 0; k < dim; ++k) {
                lo[std::size_t(k)] = std::min(lo[std::size_t(k)], x[std::size_t(k)]);
                hi[std::size_t(k)] = std::max(hi[std::size_t(k)], x[std::size_t(k)]);
            }
        for (int k = 0; k < dim; ++k)
            max_diam = std::max(max_diam, hi[std::size_t(k)] - lo[std::size_t(k)]);
    }
    if (spacing * n <= 2 * max_diam)
        throw std::invalid_argument("approximating_measure: spacing*n too small for orbit supports");

    std::map<LatticePoint, double> e;
    double placed = 0;
    std::int64_t center = 0;
    for (const auto& o : xi.orbits()) {
        SparseMeasure part = o.representative().shifted(unit(dim, 0, center));
        for (const auto& [x, w] : part.entries()) e[x] += w;
        placed += o.mass();
        center += spacing * n;
    }
    double deficit = 1.0 - placed;
    if (deficit > 0) {
        SparseMeasure background = uniform_box(dim, n, deficit);
        for (const auto& [x, w] : background.entries()) e[x] += w;
    }
    return SparseMeasure(dim, std::move(e));
}

}  // namespace ldrw
