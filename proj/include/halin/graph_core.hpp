#pragma once

// Locally finite graphs given by a neighbor oracle, their finite truncations,
// and the hexagonal quarter-grid pattern.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace halin {

using VertexId = std::uint64_t;
using Edge = std::pair<VertexId, VertexId>;

struct Coord {
    std::int64_t i = 0;
    std::int64_t j = 0;

    friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
};

/// Cantor pairing. Bijective between N x N and N.
constexpr VertexId encode(Coord c) {
    if (c.i < 0 || c.j < 0) throw std::domain_error("negative coordinate");
    const auto s = static_cast<VertexId>(c.i + c.j);
    return s * (s + 1) / 2 + static_cast<VertexId>(c.j);
}

inline Coord decode(VertexId id) {
    auto w = static_cast<VertexId>((std::sqrt(8.0L * static_cast<long double>(id) + 1.0L) - 1.0L) / 2.0L);
    // the floating estimate can be off by one for large ids
    while (w * (w + 1) / 2 > id) --w;
    while ((w + 1) * (w + 2) / 2 <= id) ++w;
    const VertexId j = id - w * (w + 1) / 2;
    return Coord{static_cast<std::int64_t>(w - j), static_cast<std::int64_t>(j)};
}

/// How vertex ids of a finite graph map back to coordinates, for labels.
enum class Labeling { none, pairing, heap };

inline std::optional<Coord> label_of(Labeling labeling, VertexId v) {
    switch (labeling) {
        case Labeling::pairing:
            return decode(v);
        case Labeling::heap: {
            std::int64_t depth = 0;
            VertexId first = 0;  // heap index of the first vertex on this level
            while (v >= 2 * first + 1) {
                first = 2 * first + 1;
                ++depth;
            }
            return Coord{depth, static_cast<std::int64_t>(v - first)};
        }
        case Labeling::none:
            break;
    }
    return std::nullopt;
}

/// Finite simple undirected graph with sorted vertex and neighbor lists.
class FiniteGraph {
  public:
    FiniteGraph() = default;

    /// Throws std::invalid_argument on loops, duplicate edges or endpoints
    /// missing from `vertices` (when `vertices` is non-empty it must cover every endpoint).
    static FiniteGraph from_edges(std::vector<VertexId> vertices, std::span<const Edge> edges,
                                  Labeling labeling = Labeling::none) {
        for (const auto& [u, v] : edges) {
            vertices.push_back(u);
            vertices.push_back(v);
        }
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

        FiniteGraph g;
        g.labeling_ = labeling;
        g.vertices_ = std::move(vertices);
        g.adj_.resize(g.vertices_.size());
        for (const auto& [u, v] : edges) {
            if (u == v) throw std::invalid_argument("loop edge at vertex " + std::to_string(u));
            const auto iu = *g.index_of(u);
            const auto iv = *g.index_of(v);
            g.adj_[iu].push_back(iv);
            g.adj_[iv].push_back(iu);
        }
        for (auto& nb : g.adj_) {
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                throw std::invalid_argument("duplicate edge");
        }
        return g;
    }

    std::size_t size() const { return vertices_.size(); }
    bool empty() const { return vertices_.empty(); }
    std::span<const VertexId> vertices() const { return vertices_; }
    VertexId vertex(std::size_t index) const { return vertices_[index]; }
    Labeling labeling() const { return labeling_; }

    std::optional<std::size_t> index_of(VertexId v) const {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it == vertices_.end() || *it != v) return std::nullopt;
        return static_cast<std::size_t>(it - vertices_.begin());
    }

    bool contains(VertexId v) const { return index_of(v).has_value(); }

    std::size_t checked_index(VertexId v) const {
        auto idx = index_of(v);
        if (!idx) throw std::domain_error("vertex " + std::to_string(v) + " not in graph");
        return *idx;
    }

    /// Neighbor indices (positions in vertices()), ascending.
    std::span<const std::size_t> neighbor_indices(std::size_t index) const { return adj_[index]; }

    std::vector<VertexId> neighbors(VertexId v) const {
        std::vector<VertexId> out;
        for (auto idx : adj_[checked_index(v)]) out.push_back(vertices_[idx]);
        return out;
    }

    std::size_t degree(VertexId v) const { return adj_[checked_index(v)].size(); }

    bool adjacent(VertexId u, VertexId v) const {
        auto iu = index_of(u);
        auto iv = index_of(v);
        if (!iu || !iv) return false;
        return std::binary_search(adj_[*iu].begin(), adj_[*iu].end(), *iv);
    }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& nb : adj_) twice += nb.size();
        return twice / 2;
    }

    /// Edges (u, v) with u < v in ascending pair order.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::size_t a = 0; a < adj_.size(); ++a)
            for (auto b : adj_[a])
                if (a < b) out.emplace_back(vertices_[a], vertices_[b]);
        return out;
    }

    /// Induced subgraph on `keep` (vertices absent from this graph are ignored).
    FiniteGraph induced(std::span<const VertexId> keep) const {
        std::vector<VertexId> kept;
        for (auto v : keep)
            if (contains(v)) kept.push_back(v);
        std::sort(kept.begin(), kept.end());
        kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
        std::vector<Edge> es;
        for (auto v : kept)
            for (auto idx : adj_[*index_of(v)]) {
                const auto u = vertices_[idx];
                if (v < u && std::binary_search(kept.begin(), kept.end(), u)) es.emplace_back(v, u);
            }
        return from_edges(std::move(kept), es, labeling_);
    }

    friend bool operator==(const FiniteGraph& a, const FiniteGraph& b) {
        return a.vertices_ == b.vertices_ && a.adj_ == b.adj_;
    }

  private:
    std::vector<VertexId> vertices_;
    std::vector<std::vector<std::size_t>> adj_;
    Labeling labeling_ = Labeling::none;
};

enum class Family { hex_quarter_grid, grid2d, binary_tree, ladder, finite };

/// A locally finite graph given by a deterministic neighbor oracle.
///
/// Built-in families are hard-coded; `finite` wraps an immutable FiniteGraph.
/// Coordinates for the 2-d families are coded with the Cantor pairing, the
/// binary tree uses heap indices (root 0, children 2v+1 and 2v+2).
class LazyGraph {
  public:
    static LazyGraph hex_quarter_grid() { return LazyGraph(Family::hex_quarter_grid); }
    static LazyGraph grid2d() { return LazyGraph(Family::grid2d); }
    static LazyGraph binary_tree() { return LazyGraph(Family::binary_tree); }
    static LazyGraph ladder() { return LazyGraph(Family::ladder); }
    static LazyGraph finite(FiniteGraph g) {
        LazyGraph lg(Family::finite);
        lg.finite_ = std::make_shared<const FiniteGraph>(std::move(g));
        return lg;
    }

    Family family() const { return family_; }

    std::string name() const {
        switch (family_) {
            case Family::hex_quarter_grid: return "hex";
            case Family::grid2d: return "grid2d";
            case Family::binary_tree: return "binary_tree";
            case Family::ladder: return "ladder";
            case Family::finite: return "file";
        }
        return "?";
    }

    Labeling labeling() const {
        switch (family_) {
            case Family::binary_tree: return Labeling::heap;
            case Family::finite: return finite_->labeling();
            default: return Labeling::pairing;
        }
    }

    /// Canonical origin: coordinate (0,0), the tree root, or the smallest id of a finite graph.
    VertexId origin() const {
        if (family_ == Family::finite) {
            if (finite_->empty()) throw std::domain_error("empty graph has no origin");
            return finite_->vertex(0);
        }
        return 0;
    }

    bool valid(VertexId v) const {
        switch (family_) {
            case Family::ladder: return decode(v).i <= 1;
            case Family::finite: return finite_->contains(v);
            case Family::binary_tree: return v <= (std::numeric_limits<VertexId>::max() - 2) / 2;
            default: return v < kMaxPairedId;
        }
    }

    /// Sorted, duplicate-free neighbor list. Throws std::domain_error for invalid vertices.
    std::vector<VertexId> neighbors(VertexId v) const {
        if (!valid(v)) throw std::domain_error("vertex " + std::to_string(v) + " is not valid for family " + name());
        std::vector<VertexId> out;
        switch (family_) {
            case Family::hex_quarter_grid: {
                const auto [i, j] = decode(v);
                if (j > 0) out.push_back(encode({i, j - 1}));
                out.push_back(encode({i, j + 1}));
                if (hex_rung(i, j)) out.push_back(encode({i + 1, j}));
                if (i > 0 && hex_rung(i - 1, j)) out.push_back(encode({i - 1, j}));
                break;
            }
            case Family::grid2d: {
                const auto [i, j] = decode(v);
                if (i > 0) out.push_back(encode({i - 1, j}));
                if (j > 0) out.push_back(encode({i, j - 1}));
                out.push_back(encode({i + 1, j}));
                out.push_back(encode({i, j + 1}));
                break;
            }
            case Family::ladder: {
                const auto [i, j] = decode(v);
                if (j > 0) out.push_back(encode({i, j - 1}));
                out.push_back(encode({i, j + 1}));
                out.push_back(encode({1 - i, j}));
                break;
            }
            case Family::binary_tree:
                if (v > 0) out.push_back((v - 1) / 2);
                out.push_back(2 * v + 1);
                out.push_back(2 * v + 2);
                break;
            case Family::finite:
                return finite_->neighbors(v);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// The rung rule of the hexagonal quarter grid: (i,j)-(i+1,j) is an edge iff j >= i and j-i is even.
    static constexpr bool hex_rung(std::int64_t i, std::int64_t j) { return j >= i && (j - i) % 2 == 0; }

  private:
    explicit LazyGraph(Family f) : family_(f) {}

    // keeps i+j comfortably inside the pairing's range
    static constexpr VertexId kMaxPairedId = VertexId{1} << 60;

    Family family_;
    std::shared_ptr<const FiniteGraph> finite_;
};

struct HexPrefixSpec {
    std::int64_t cols = 1;
    std::int64_t depth = 1;

    bool valid() const { return cols >= 1 && depth >= 1; }
    friend constexpr bool operator==(const HexPrefixSpec&, const HexPrefixSpec&) = default;
};

/// Pattern edges of the hex prefix, each as (lower coord, higher coord), in ascending order.
inline std::vector<std::pair<Coord, Coord>> hex_pattern_edges(const HexPrefixSpec& spec) {
    std::vector<std::pair<Coord, Coord>> out;
    for (std::int64_t i = 0; i < spec.cols; ++i)
        for (std::int64_t j = 0; j < spec.depth; ++j) {
            if (j + 1 < spec.depth) out.push_back({{i, j}, {i, j + 1}});
            if (i + 1 < spec.cols && LazyGraph::hex_rung(i, j)) out.push_back({{i, j}, {i + 1, j}});
        }
    std::sort(out.begin(), out.end());
    return out;
}

inline FiniteGraph hex_prefix(const HexPrefixSpec& spec) {
    if (!spec.valid()) throw std::invalid_argument("hex prefix needs cols >= 1 and depth >= 1");
    std::vector<VertexId> vs;
    for (std::int64_t i = 0; i < spec.cols; ++i)
        for (std::int64_t j = 0; j < spec.depth; ++j) vs.push_back(encode({i, j}));
    std::vector<Edge> es;
    for (const auto& [a, b] : hex_pattern_edges(spec)) es.emplace_back(encode(a), encode(b));
    return FiniteGraph::from_edges(std::move(vs), es, Labeling::pairing);
}

inline constexpr std::size_t kDefaultVertexBudget = std::size_t{1} << 20;

/// ball(root, radius) together with BFS distances, possibly clamped to a vertex budget.
struct Truncation {
    FiniteGraph graph;
    VertexId root = 0;
    int requested_radius = 0;
    int radius = 0;              ///< effective radius; < requested_radius when clamped
    std::vector<int> distance;   ///< aligned with graph.vertices()

    bool clamped() const { return radius < requested_radius; }

    int distance_of(VertexId v) const { return distance[graph.checked_index(v)]; }

    std::vector<VertexId> sphere(int r) const {
        std::vector<VertexId> out;
        for (std::size_t k = 0; k < distance.size(); ++k)
            if (distance[k] == r) out.push_back(graph.vertex(k));
        return out;
    }

    std::vector<VertexId> ball_vertices(int r) const {
        std::vector<VertexId> out;
        for (std::size_t k = 0; k < distance.size(); ++k)
            if (distance[k] <= r) out.push_back(graph.vertex(k));
        return out;
    }
};

/// Breadth-first truncation. Stops before the first layer that would push the
/// vertex count past `budget`; the returned `radius` records where it stopped.
inline Truncation truncate(const LazyGraph& g, VertexId root, int radius,
                           std::size_t budget = kDefaultVertexBudget) {
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    if (!g.valid(root)) throw std::domain_error("root " + std::to_string(root) + " is not valid for family " + g.name());

    std::unordered_map<VertexId, int> dist{{root, 0}};
    std::vector<VertexId> layer{root};
    int reached = 0;
    while (reached < radius) {
        std::vector<VertexId> next;
        std::vector<VertexId> fresh;
        for (auto v : layer)
            for (auto u : g.neighbors(v))
                if (!dist.contains(u)) fresh.push_back(u);
        std::sort(fresh.begin(), fresh.end());
        fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
        if (dist.size() + fresh.size() > budget) break;
        for (auto u : fresh) dist.emplace(u, reached + 1);
        layer = std::move(fresh);
        ++reached;
        if (layer.empty()) {
            // finite component exhausted; further layers are empty
            reached = radius;
            break;
        }
    }

    std::vector<VertexId> vs;
    vs.reserve(dist.size());
    for (const auto& [v, d] : dist) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    std::vector<Edge> es;
    for (auto v : vs)
        for (auto u : g.neighbors(v))
            if (v < u && dist.contains(u)) es.emplace_back(v, u);

    Truncation t;
    t.graph = FiniteGraph::from_edges(std::move(vs), es, g.labeling());
    t.root = root;
    t.requested_radius = radius;
    t.radius = reached;
    t.distance.resize(t.graph.size());
    for (std::size_t k = 0; k < t.graph.size(); ++k) t.distance[k] = dist.at(t.graph.vertex(k));
    return t;
}

/// Induced subgraph on all vertices within distance r of root.
/// Throws std::length_error if that exceeds the vertex budget.
inline FiniteGraph ball(const LazyGraph& g, VertexId root, int r, std::size_t budget = kDefaultVertexBudget) {
    auto t = truncate(g, root, r, budget);
    if (t.clamped())
        throw std::length_error("ball of radius " + std::to_string(r) + " exceeds the vertex budget of " +
                                std::to_string(budget));
    return std::move(t.graph);
}

/// Vertices at exact distance r, ascending.
inline std::vector<VertexId> sphere(const LazyGraph& g, VertexId root, int r,
                                    std::size_t budget = kDefaultVertexBudget) {
    auto t = truncate(g, root, r, budget);
    if (t.clamped())
        throw std::length_error("sphere of radius " + std::to_string(r) + " exceeds the vertex budget");
    return t.sphere(r);
}

/// Connected components; returns a component label per vertex index.
inline std::vector<std::size_t> component_labels(const FiniteGraph& g, const std::vector<bool>& removed = {}) {
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(g.size(), none);
    std::size_t next = 0;
    std::deque<std::size_t> queue;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (label[s] != none || (!removed.empty() && removed[s])) continue;
        label[s] = next;
        queue.push_back(s);
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto u : g.neighbor_indices(v))
                if (label[u] == none && (removed.empty() || !removed[u])) {
                    label[u] = next;
                    queue.push_back(u);
                }
        }
        ++next;
    }
    return label;
}

inline bool is_connected(const FiniteGraph& g) {
    if (g.empty()) return true;
    auto label = component_labels(g);
    return std::all_of(label.begin(), label.end(), [](std::size_t l) { return l == 0; });
}

}  // namespace halin
