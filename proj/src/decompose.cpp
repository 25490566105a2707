#include "ldrw/decompose.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ldrw {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t(0));
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void merge(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

}  // namespace

Decomposition cluster_decompose(const SparseMeasure& mu, std::int64_t link_radius,
                                double mass_floor) {
    if (link_radius < 0) throw std::invalid_argument("cluster_decompose: link_radius must be >= 0");
    if (mass_floor < 0) throw std::invalid_argument("cluster_decompose: mass_floor must be >= 0");
    const int d = mu.dim();

    std::vector<const LatticePoint*> sites;
    std::vector<double> weights;
    sites.reserve(mu.support_size());
    for (const auto& [x, w] : mu.entries()) {
        sites.push_back(&x);
        weights.push_back(w);
    }
    const std::size_t n = sites.size();

    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (l1_norm(sub(*sites[i], *sites[j])) <= link_radius) uf.merge(i, j);

    std::map<std::size_t, std::map<LatticePoint, double>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters[uf.find(i)].emplace(*sites[i], weights[i]);

    Decomposition out{{}, SparseMeasure(d)};
    std::map<LatticePoint, double> residual;
    std::vector<SparseMeasure> pieces;
    for (auto& [root, entries] : clusters) {
        double mass = 0;
        for (const auto& [x, w] : entries) mass += w;
        if (mass >= mass_floor)
            pieces.emplace_back(d, std::move(entries));
        else
            for (const auto& [x, w] : entries) residual.emplace(x, w);
    }
    std::sort(pieces.begin(), pieces.end(), [](const SparseMeasure& a, const SparseMeasure& b) {
        if (a.mass() != b.mass()) return a.mass() > b.mass();
        return std::lexicographical_compare(a.entries().begin(), a.entries().end(),
                                            b.entries().begin(), b.entries().end());
    });
    out.pieces = std::move(pieces);
    out.residual = SparseMeasure(d, std::move(residual));
    return out;
}

CompactPoint embed(const SparseMeasure& mu, std::int64_t link_radius, double mass_floor) {
    Decomposition dec = cluster_decompose(mu, link_radius, mass_floor);
    std::vector<Orbit> orbits;
    orbits.reserve(dec.pieces.size());
    for (const auto& piece : dec.pieces) orbits.emplace_back(piece);
    return CompactPoint(mu.dim(), std::move(orbits));
}

double separation_integral(const SparseMeasure& a, const SparseMeasure& b, const SiteFunction& w) {
    if (a.dim() != b.dim()) throw std::invalid_argument("separation_integral: dimension mismatch");
    double total = 0;
    for (const auto& [x, wa] : a.entries())
        for (const auto& [y, wb] : b.entries()) {
            auto it = w.find(sub(x, y));
            if (it != w.end()) total += it->second * wa * wb;
        }
    return total;
}

}  // namespace ldrw
