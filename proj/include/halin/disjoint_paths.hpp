#pragma once

// Vertex-disjoint A-B paths by unit-capacity max flow on the vertex-split graph.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "graph_core.hpp"
#include "ray.hpp"

namespace halin {

/// Ordered, repetition-free vertex sequence; consecutive vertices adjacent in the host.
using Path = std::vector<VertexId>;

/// How vertices of A and B are shared between paths.
///
/// `shared`: paths are internally disjoint and may share endpoints in A or B
/// (the s-t form of Menger; a direct A-B edge carries one path).
/// `exclusive`: paths are pairwise disjoint, endpoints included (the set form).
/// In both, a vertex of A and B is a single-vertex path, and paths meet A only
/// at their first vertex and B only at their last.
enum class EndpointPolicy { shared, exclusive };

/// Dual certificate. In `shared` mode direct A-B edges cannot be cut by a vertex
/// outside A and B, so they are reported separately; size() is the Menger value.
struct Separator {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;

    std::size_t size() const { return vertices.size() + edges.size(); }
};

struct MengerResult {
    std::vector<Path> paths;
    Separator separator;
};

namespace detail {

/// Dinic's algorithm over integer capacities. Arcs are visited in insertion order,
/// so results depend only on the order in which the network is built.
class FlowNetwork {
  public:
    static constexpr std::int64_t kInf = std::numeric_limits<std::int32_t>::max();

    explicit FlowNetwork(std::size_t nodes) : out_(nodes) {}

    std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t cap) {
        out_[from].push_back(arcs_.size());
        arcs_.push_back({to, cap, 0});
        out_[to].push_back(arcs_.size());
        arcs_.push_back({from, 0, 0});
        return arcs_.size() - 2;
    }

    std::int64_t max_flow(std::size_t s, std::size_t t) {
        std::int64_t total = 0;
        level_.assign(out_.size(), -1);
        next_.assign(out_.size(), 0);
        while (build_levels(s, t)) {
            std::fill(next_.begin(), next_.end(), 0);
            while (auto pushed = augment(s, t, kInf)) total += pushed;
        }
        return total;
    }

    /// Nodes reachable from s in the residual network.
    std::vector<bool> residual_reachable(std::size_t s) const {
        std::vector<bool> seen(out_.size(), false);
        std::deque<std::size_t> queue{s};
        seen[s] = true;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto a : out_[v]) {
                const auto& arc = arcs_[a];
                if (arc.cap - arc.flow > 0 && !seen[arc.to]) {
                    seen[arc.to] = true;
                    queue.push_back(arc.to);
                }
            }
        }
        return seen;
    }

    std::size_t arc_count() const { return arcs_.size(); }
    std::int64_t flow(std::size_t arc) const { return arcs_[arc].flow; }
    std::int64_t capacity(std::size_t arc) const { return arcs_[arc].cap; }
    std::size_t head(std::size_t arc) const { return arcs_[arc].to; }
    std::span<const std::size_t> out_arcs(std::size_t node) const { return out_[node]; }
    static bool forward(std::size_t arc) { return arc % 2 == 0; }

  private:
    struct Arc {
        std::size_t to;
        std::int64_t cap;
        std::int64_t flow;
    };

    bool build_levels(std::size_t s, std::size_t t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::deque<std::size_t> queue{s};
        level_[s] = 0;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            for (auto a : out_[v]) {
                const auto& arc = arcs_[a];
                if (arc.cap - arc.flow > 0 && level_[arc.to] < 0) {
                    level_[arc.to] = level_[v] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        return level_[t] >= 0;
    }

    // iterative DFS along the level graph; returns the amount pushed on one path
    std::int64_t augment(std::size_t s, std::size_t t, std::int64_t limit) {
        std::vector<std::size_t> stack_arcs;
        std::size_t v = s;
        while (true) {
            if (v == t) {
                std::int64_t push = limit;
                for (auto a : stack_arcs) push = std::min(push, arcs_[a].cap - arcs_[a].flow);
                for (auto a : stack_arcs) {
                    arcs_[a].flow += push;
                    arcs_[a ^ 1].flow -= push;
                }
                return push;
            }
            bool advanced = false;
            for (; next_[v] < out_[v].size(); ++next_[v]) {
                const auto a = out_[v][next_[v]];
                const auto& arc = arcs_[a];
                if (arc.cap - arc.flow > 0 && level_[arc.to] == level_[v] + 1) {
                    stack_arcs.push_back(a);
                    v = arc.to;
                    advanced = true;
                    break;
                }
            }
            if (advanced) continue;
            if (stack_arcs.empty()) return 0;
            level_[v] = -1;  // dead end
            const auto a = stack_arcs.back();
            stack_arcs.pop_back();
            v = arcs_[a ^ 1].to;
            ++next_[v];
        }
    }

    std::vector<Arc> arcs_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<int> level_;
    std::vector<std::size_t> next_;
};

inline std::vector<VertexId> sorted_unique(std::span<const VertexId> vs) {
    std::vector<VertexId> out(vs.begin(), vs.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Maximum family of A-B paths (see EndpointPolicy) avoiding `forbidden`, with a
/// minimum separator of the same size. Throws std::domain_error if A or B is
/// empty, meets `forbidden`, or contains vertices outside g.
inline MengerResult menger(const FiniteGraph& g, std::span<const VertexId> a_set, std::span<const VertexId> b_set,
                           std::span<const VertexId> forbidden_set = {},
                           EndpointPolicy policy = EndpointPolicy::shared) {
    if (a_set.empty() || b_set.empty()) throw std::domain_error("A and B must be non-empty");
    const std::size_t n = g.size();
    std::vector<bool> in_a(n, false), in_b(n, false), forbidden(n, false);
    for (auto v : forbidden_set)
        if (auto idx = g.index_of(v)) forbidden[*idx] = true;
    for (auto v : a_set) {
        const auto idx = g.checked_index(v);
        if (forbidden[idx]) throw std::domain_error("A meets the forbidden set at " + std::to_string(v));
        in_a[idx] = true;
    }
    for (auto v : b_set) {
        const auto idx = g.checked_index(v);
        if (forbidden[idx]) throw std::domain_error("B meets the forbidden set at " + std::to_string(v));
        in_b[idx] = true;
    }

    const auto kInf = detail::FlowNetwork::kInf;
    const bool shared = policy == EndpointPolicy::shared;
    auto vertex_cap = [&](std::size_t v) -> std::int64_t {
        if (shared && (in_a[v] != in_b[v])) return kInf;
        return 1;
    };
    const std::size_t source = 2 * n;
    const std::size_t sink = 2 * n + 1;
    detail::FlowNetwork net(2 * n + 2);
    std::vector<std::size_t> vertex_arc(n, 0);
    struct EdgeArc {
        std::size_t arc;
        std::size_t from;
        std::size_t to;
    };
    std::vector<EdgeArc> edge_arcs;

    for (std::size_t v = 0; v < n; ++v) {
        if (forbidden[v]) continue;
        if (in_a[v]) net.add_arc(source, 2 * v, kInf);
        vertex_arc[v] = net.add_arc(2 * v, 2 * v + 1, vertex_cap(v));
        if (in_b[v]) net.add_arc(2 * v + 1, sink, kInf);
        if (in_b[v]) continue;  // paths stop at their first B vertex
        for (auto u : g.neighbor_indices(v)) {
            if (forbidden[u] || in_a[u]) continue;  // paths leave A only at their start
            const bool terminal_edge = vertex_cap(v) == kInf && vertex_cap(u) == kInf;
            const auto arc = net.add_arc(2 * v + 1, 2 * u, terminal_edge ? 1 : kInf);
            if (terminal_edge) edge_arcs.push_back({arc, v, u});
        }
    }

    net.max_flow(source, sink);

    MengerResult result;
    // decomposition: follow positive flow from the source, lowest arc first
    std::vector<std::int64_t> used(net.arc_count(), 0);
    auto available = [&](std::size_t arc) { return net.flow(arc) - used[arc]; };
    for (auto a : net.out_arcs(source)) {
        if (!detail::FlowNetwork::forward(a)) continue;
        while (available(a) > 0) {
            ++used[a];
            Path path;
            std::size_t node = net.head(a);
            while (node != sink) {
                if (node % 2 == 0) path.push_back(g.vertex(node / 2));
                std::size_t step = std::numeric_limits<std::size_t>::max();
                for (auto b : net.out_arcs(node))
                    if (detail::FlowNetwork::forward(b) && available(b) > 0) {
                        step = b;
                        break;
                    }
                if (step == std::numeric_limits<std::size_t>::max())
                    throw std::logic_error("flow decomposition lost conservation");
                ++used[step];
                node = net.head(step);
            }
            result.paths.push_back(std::move(path));
        }
    }

    const auto reach = net.residual_reachable(source);
    for (std::size_t v = 0; v < n; ++v)
        if (!forbidden[v] && reach[2 * v] && !reach[2 * v + 1]) result.separator.vertices.push_back(g.vertex(v));
    for (const auto& e : edge_arcs)
        if (reach[2 * e.from + 1] && !reach[2 * e.to]) result.separator.edges.emplace_back(g.vertex(e.from), g.vertex(e.to));
    return result;
}

inline std::vector<Path> max_vertex_disjoint_paths(const FiniteGraph& g, std::span<const VertexId> a,
                                                   std::span<const VertexId> b,
                                                   std::span<const VertexId> forbidden = {},
                                                   EndpointPolicy policy = EndpointPolicy::shared) {
    return menger(g, a, b, forbidden, policy).paths;
}

inline Separator min_vertex_separator(const FiniteGraph& g, std::span<const VertexId> a, std::span<const VertexId> b,
                                      std::span<const VertexId> forbidden = {},
                                      EndpointPolicy policy = EndpointPolicy::shared) {
    return menger(g, a, b, forbidden, policy).separator;
}

/// True iff every vertex of `p` is in g, no vertex repeats, and consecutive vertices are adjacent.
inline bool is_path_in(const FiniteGraph& g, const Path& p) {
    if (p.empty()) return false;
    for (auto v : p)
        if (!g.contains(v)) return false;
    for (std::size_t k = 0; k + 1 < p.size(); ++k)
        if (!g.adjacent(p[k], p[k + 1])) return false;
    auto sorted = detail::sorted_unique(p);
    return sorted.size() == p.size();
}

inline bool pairwise_disjoint(std::span<const Path> paths) {
    std::unordered_set<VertexId> seen;
    for (const auto& p : paths)
        for (auto v : p)
            if (!seen.insert(v).second) return false;
    return true;
}

/// Fewer than the requested number of paths exist; `separator` certifies the maximum.
struct FamilyShortfall {
    std::size_t found = 0;
    Separator separator;
};

using FamilySearch = std::variant<std::vector<Path>, FamilyShortfall>;

/// A maximum family of disjoint src-dst paths avoiding `forbidden`, each listed from
/// its src end and meeting src and dst only at its ends. Succeeds iff it has at least t paths.
inline FamilySearch connecting_family(const FiniteGraph& g, const Ray& src, const Ray& dst, std::size_t t,
                                      std::span<const VertexId> forbidden = {}) {
    const std::unordered_set<VertexId> in_src(src.vertices.begin(), src.vertices.end());
    for (auto v : dst.vertices)
        if (in_src.contains(v)) throw std::domain_error("rays meet at " + std::to_string(v));
    auto m = menger(g, src.vertices, dst.vertices, forbidden, EndpointPolicy::exclusive);
    if (m.paths.size() >= t) return std::move(m.paths);
    return FamilyShortfall{m.paths.size(), std::move(m.separator)};
}

}  // namespace halin
