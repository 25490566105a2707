#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldrw {

// A site of the d-dimensional integer lattice. Lexicographic order via the
// vector's operator< keeps map iteration and canonicalization deterministic.
using LatticePoint = std::vector<std::int64_t>;

// Finite-support real-valued function on lattice sites (values, not a measure).
using SiteFunction = std::map<LatticePoint, double>;

inline void require_dim(const LatticePoint& p, std::size_t dim, const char* what) {
    if (p.size() != dim)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
    require_dim(b, a.size(), "add");
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline LatticePoint sub(const LatticePoint& a, const LatticePoint& b) {
    require_dim(b, a.size(), "sub");
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline LatticePoint negate(const LatticePoint& a) {
    LatticePoint r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline std::int64_t l1_norm(const LatticePoint& a) {
    std::int64_t s = 0;
    for (auto c : a) s += c < 0 ? -c : c;
    return s;
}

inline std::int64_t linf_norm(const LatticePoint& a) {
    std::int64_t s = 0;
    for (auto c : a) s = std::max(s, c < 0 ? -c : c);
    return s;
}

inline double l2_norm(const LatticePoint& a) {
    double s = 0;
    for (auto c : a) s += double(c) * double(c);
    return std::sqrt(s);
}

inline LatticePoint origin(int dim) { return LatticePoint(std::size_t(dim), 0); }

inline LatticePoint unit(int dim, int axis, std::int64_t scale = 1) {
    LatticePoint r(std::size_t(dim), 0);
    r[std::size_t(axis)] = scale;
    return r;
}

inline std::string to_string(const LatticePoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s + ")";
}

}  // namespace ldrw
