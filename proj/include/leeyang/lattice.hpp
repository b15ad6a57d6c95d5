#pragma once

// Finite subsets of Z^d as graphs with free boundary conditions. A domain is
// immutable after construction and safe to share across threads. Vertices are
// kept in canonical lexicographic order so that equal sets always produce
// identical representations (and therefore identical serializations).

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "leeyang/errors.hpp"

namespace leeyang {

using Coord = std::vector<int>;

class SpinDomain {
public:
    // Validates, sorts and derives the nearest-neighbor edge set.
    static SpinDomain from_vertices(int dimension, std::vector<Coord> vertices,
                                    const Caps& caps = {}) {
        if (dimension < 1) throw ConfigError("dimension must be >= 1");
        if (vertices.empty()) throw ConfigError("domain must contain at least one vertex");
        if (static_cast<std::int64_t>(vertices.size()) > caps.max_vertices)
            throw CapExceeded("vertices", vertices.size(), caps.max_vertices);
        for (const auto& v : vertices)
            if (static_cast<int>(v.size()) != dimension)
                throw ConfigError("vertex arity does not match dimension");
        std::sort(vertices.begin(), vertices.end());
        for (std::size_t i = 1; i < vertices.size(); ++i)
            if (vertices[i] == vertices[i - 1]) throw ConfigError("duplicate vertex");
        return SpinDomain(dimension, std::move(vertices));
    }

    int dimension() const { return dim_; }
    int size() const { return static_cast<int>(verts_.size()); }
    const std::vector<Coord>& vertices() const { return verts_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Index of a coordinate, or -1 when absent.
    int index_of(const Coord& c) const {
        auto it = std::lower_bound(verts_.begin(), verts_.end(), c);
        if (it == verts_.end() || *it != c) return -1;
        return static_cast<int>(it - verts_.begin());
    }

    bool contains(const Coord& c) const { return index_of(c) >= 0; }

    // Vertex-set inclusion (dimension must match).
    bool contains_domain(const SpinDomain& other) const {
        if (other.dim_ != dim_) return false;
        for (const auto& v : other.verts_)
            if (!contains(v)) return false;
        return true;
    }

    friend bool operator==(const SpinDomain& a, const SpinDomain& b) {
        return a.dim_ == b.dim_ && a.verts_ == b.verts_;
    }

    // Axis-aligned bounding box extents; a domain is a full rectangle iff the
    // product of extents equals the vertex count.
    std::vector<int> extents() const {
        std::vector<int> lo(dim_, 0), hi(dim_, 0), ext(dim_, 0);
        for (int a = 0; a < dim_; ++a) {
            lo[a] = hi[a] = verts_[0][a];
            for (const auto& v : verts_) {
                lo[a] = std::min(lo[a], v[a]);
                hi[a] = std::max(hi[a], v[a]);
            }
            ext[a] = hi[a] - lo[a] + 1;
        }
        return ext;
    }

    bool is_rectangle() const {
        std::int64_t prod = 1;
        for (int e : extents()) prod *= e;
        return prod == size();
    }

private:
    SpinDomain(int dim, std::vector<Coord> verts) : dim_(dim), verts_(std::move(verts)) {
        derive_edges();
    }

    void derive_edges() {
        // Every unordered nearest-neighbor pair exactly once, sorted by (i, j).
        for (int i = 0; i < size(); ++i) {
            Coord c = verts_[i];
            for (int a = 0; a < dim_; ++a) {
                c[a] += 1;
                int j = index_of(c);
                if (j >= 0) edges_.emplace_back(std::min(i, j), std::max(i, j));
                c[a] -= 1;
            }
        }
        std::sort(edges_.begin(), edges_.end());
    }

    int dim_;
    std::vector<Coord> verts_;
    std::vector<std::pair<int, int>> edges_;
};

// Axis-aligned box with the given side lengths, anchored at the origin.
inline SpinDomain make_rectangle(int d, const std::vector<int>& side_lengths,
                                 const Caps& caps = {}) {
    if (d < 1) throw ConfigError("dimension must be >= 1");
    if (static_cast<int>(side_lengths.size()) != d)
        throw ConfigError("expected " + std::to_string(d) + " side lengths");
    std::int64_t count = 1;
    for (int s : side_lengths) {
        if (s < 1) throw ConfigError("side lengths must be positive");
        count *= s;
        if (count > caps.max_vertices)
            throw CapExceeded("vertices", static_cast<std::uint64_t>(count), caps.max_vertices);
    }
    std::vector<Coord> verts;
    verts.reserve(static_cast<std::size_t>(count));
    Coord c(d, 0);
    for (;;) {
        verts.push_back(c);
        int a = d - 1;
        while (a >= 0 && ++c[a] == side_lengths[a]) c[a--] = 0;
        if (a < 0) break;
    }
    return SpinDomain::from_vertices(d, std::move(verts), caps);
}

// B_n = [-n, n]^d.
inline SpinDomain make_box(int d, int n, const Caps& caps = {}) {
    if (n < 0) throw ConfigError("box radius must be >= 0");
    std::vector<int> sides(static_cast<std::size_t>(d), 2 * n + 1);
    SpinDomain rect = make_rectangle(d, sides, caps);
    std::vector<Coord> verts = rect.vertices();
    for (auto& v : verts)
        for (int& x : v) x -= n;
    return SpinDomain::from_vertices(d, std::move(verts), caps);
}

// [B_1, ..., B_n_max]; consecutive entries are strictly nested.
inline std::vector<SpinDomain> nested_boxes(int d, int n_max, const Caps& caps = {}) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    std::vector<SpinDomain> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out.push_back(make_box(d, n, caps));
    return out;
}

}  // namespace leeyang
