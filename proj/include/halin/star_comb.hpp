#pragma once

// Finite star-comb extraction on a connected graph with a marked vertex set U.
//
// Works on a breadth-first spanning tree rooted at the lowest-id U vertex.
// A star is reported when some vertex sees k tree components containing U
// (counting itself when it lies in U and centre leaves are allowed); otherwise
// the tree path with the most U-reaching vertices becomes the comb spine.

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "disjoint_paths.hpp"
#include "graph_core.hpp"

namespace halin {

struct Star {
    VertexId center = 0;
    std::vector<VertexId> leaves;
    std::vector<Path> spokes;  ///< spokes[m] runs from center to leaves[m]
};

struct Comb {
    Path spine;
    std::vector<VertexId> teeth;
    std::vector<Path> attachments;  ///< attachments[m] runs from a spine vertex to teeth[m]
};

struct Exhausted {
    std::size_t best_star = 0;
    std::size_t best_comb = 0;
};

using StarCombResult = std::variant<Star, Comb, Exhausted>;

struct StarCombOptions {
    /// Allow a zero-length spoke (leaf == center) when the center lies in U.
    bool center_may_be_leaf = true;
};

namespace detail {

class SpanningTree {
  public:
    SpanningTree(const FiniteGraph& g, std::size_t root) : g_(&g), parent_(g.size(), kNone), depth_(g.size(), 0) {
        std::vector<bool> seen(g.size(), false);
        std::deque<std::size_t> queue{root};
        seen[root] = true;
        children_.resize(g.size());
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            order_.push_back(v);
            for (auto u : g.neighbor_indices(v))
                if (!seen[u]) {
                    seen[u] = true;
                    parent_[u] = v;
                    depth_[u] = depth_[v] + 1;
                    children_[v].push_back(u);
                    queue.push_back(u);
                }
        }
    }

    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    std::size_t parent(std::size_t v) const { return parent_[v]; }
    const std::vector<std::size_t>& children(std::size_t v) const { return children_[v]; }
    const std::vector<std::size_t>& order() const { return order_; }

    std::vector<std::size_t> tree_neighbors(std::size_t v) const {
        std::vector<std::size_t> out;
        if (parent_[v] != kNone) out.push_back(parent_[v]);
        out.insert(out.end(), children_[v].begin(), children_[v].end());
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Tree path from a to b (vertex indices).
    std::vector<std::size_t> path(std::size_t a, std::size_t b) const {
        std::vector<std::size_t> up, down;
        while (a != b) {
            if (depth_[a] >= depth_[b]) {
                up.push_back(a);
                a = parent_[a];
            } else {
                down.push_back(b);
                b = parent_[b];
            }
        }
        up.push_back(a);
        up.insert(up.end(), down.rbegin(), down.rend());
        return up;
    }

  private:
    const FiniteGraph* g_;
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> depth_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> order_;
};

/// Nearest U vertex reachable from `start` in the tree without entering `blocked`; returns the tree path from `from`.
inline std::vector<std::size_t> nearest_marked(const SpanningTree& t, std::size_t from, std::size_t start,
                                               const std::vector<bool>& marked, const std::vector<bool>& blocked) {
    std::vector<std::size_t> prev(marked.size(), SpanningTree::kNone);
    std::deque<std::size_t> queue{start};
    prev[start] = from;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (marked[v]) {
            std::vector<std::size_t> p;
            for (auto x = v; x != from; x = prev[x]) p.push_back(x);
            p.push_back(from);
            std::reverse(p.begin(), p.end());
            return p;
        }
        for (auto u : t.tree_neighbors(v))
            if (u != from && !blocked[u] && prev[u] == SpanningTree::kNone) {
                prev[u] = v;
                queue.push_back(u);
            }
    }
    return {};
}

}  // namespace detail

/// Throws std::domain_error if g is disconnected or U has vertices outside g; std::invalid_argument if k == 0.
inline StarCombResult star_or_comb(const FiniteGraph& g, std::span<const VertexId> u_set, std::size_t k,
                                   StarCombOptions options = {}) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (!is_connected(g)) throw std::domain_error("star_or_comb needs a connected graph");
    const std::size_t n = g.size();
    std::vector<bool> marked(n, false);
    std::size_t total = 0;
    for (auto v : u_set) {
        const auto idx = g.checked_index(v);
        if (!marked[idx]) ++total;
        marked[idx] = true;
    }
    if (total == 0) return Exhausted{};

    std::size_t root = 0;
    while (!marked[root]) ++root;
    const detail::SpanningTree tree(g, root);

    std::vector<std::size_t> below(n, 0);  // U vertices in each subtree
    for (auto it = tree.order().rbegin(); it != tree.order().rend(); ++it) {
        below[*it] += marked[*it] ? 1 : 0;
        if (tree.parent(*it) != detail::SpanningTree::kNone) below[tree.parent(*it)] += below[*it];
    }
    // U vertices on the far side of tree edge v -> w
    auto beyond = [&](std::size_t v, std::size_t w) {
        return tree.parent(v) == w ? total - below[v] : below[w];
    };

    // star
    std::size_t best_star = 0;
    std::size_t center = 0;
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t count = options.center_may_be_leaf && marked[v] ? 1 : 0;
        for (auto w : tree.tree_neighbors(v))
            if (beyond(v, w) > 0) ++count;
        if (count > best_star) {
            best_star = count;
            center = v;
        }
    }
    if (best_star >= k) {
        Star star;
        star.center = g.vertex(center);
        if (options.center_may_be_leaf && marked[center]) {
            star.leaves.push_back(star.center);
            star.spokes.push_back({star.center});
        }
        const std::vector<bool> blocked(n, false);
        for (auto w : tree.tree_neighbors(center)) {
            if (star.leaves.size() == k) break;
            if (beyond(center, w) == 0) continue;
            auto p = detail::nearest_marked(tree, center, w, marked, blocked);
            Path spoke;
            for (auto x : p) spoke.push_back(g.vertex(x));
            star.leaves.push_back(spoke.back());
            star.spokes.push_back(std::move(spoke));
        }
        return star;
    }

    // comb: best spine among tree paths between leaves of the tree
    std::vector<std::size_t> tree_leaves;
    for (std::size_t v = 0; v < n; ++v)
        if (tree.tree_neighbors(v).size() <= 1) tree_leaves.push_back(v);
    std::vector<bool> on_path(n, false);
    std::size_t best_comb = 0;
    std::vector<std::size_t> best_path;
    std::vector<bool> best_contrib;
    for (std::size_t a = 0; a < tree_leaves.size(); ++a)
        for (std::size_t b = a; b < tree_leaves.size(); ++b) {
            if (a == b && n > 1) continue;
            auto p = tree.path(tree_leaves[a], tree_leaves[b]);
            for (auto x : p) on_path[x] = true;
            std::vector<bool> contrib(p.size(), false);
            std::size_t score = 0;
            for (std::size_t m = 0; m < p.size(); ++m) {
                bool reach = marked[p[m]];
                for (auto w : tree.tree_neighbors(p[m]))
                    if (!on_path[w] && beyond(p[m], w) > 0) reach = true;
                contrib[m] = reach;
                score += reach ? 1 : 0;
            }
            for (auto x : p) on_path[x] = false;
            if (score > best_comb) {
                best_comb = score;
                best_path = std::move(p);
                best_contrib = std::move(contrib);
            }
        }
    if (best_comb < k) return Exhausted{best_star, best_comb};

    std::vector<std::size_t> picked;
    for (std::size_t m = 0; m < best_path.size() && picked.size() < k; ++m)
        if (best_contrib[m]) picked.push_back(m);
    std::vector<bool> spine_mask(n, false);
    Comb comb;
    for (auto m = picked.front(); m <= picked.back(); ++m) {
        comb.spine.push_back(g.vertex(best_path[m]));
        spine_mask[best_path[m]] = true;
    }
    for (auto idx : best_path) spine_mask[idx] = true;  // attachments stay off the untrimmed path too
    for (auto m : picked) {
        const auto v = best_path[m];
        Path att;
        if (marked[v]) {
            att.push_back(g.vertex(v));
        } else {
            std::vector<std::size_t> shortest;
            for (auto w : tree.tree_neighbors(v)) {
                if (spine_mask[w] || beyond(v, w) == 0) continue;
                auto p = detail::nearest_marked(tree, v, w, marked, spine_mask);
                if (!p.empty() && (shortest.empty() || p.size() < shortest.size())) shortest = std::move(p);
            }
            for (auto x : shortest) att.push_back(g.vertex(x));
        }
        comb.teeth.push_back(att.back());
        comb.attachments.push_back(std::move(att));
    }
    return comb;
}

/// Certificate check for a star with `k` leaves in U. Empty result means valid.
inline std::vector<std::string> verify_star(const FiniteGraph& g, const Star& star, std::span<const VertexId> u_set,
                                            std::size_t k) {
    std::vector<std::string> v;
    const std::unordered_set<VertexId> marked(u_set.begin(), u_set.end());
    if (!g.contains(star.center)) v.push_back("center not in graph");
    if (star.leaves.size() != k) v.push_back("expected " + std::to_string(k) + " leaves");
    if (star.spokes.size() != star.leaves.size()) {
        v.push_back("spoke count differs from leaf count");
        return v;
    }
    std::unordered_set<VertexId> leaves, used;
    for (std::size_t m = 0; m < star.spokes.size(); ++m) {
        const auto& s = star.spokes[m];
        const auto tag = "spoke " + std::to_string(m) + ": ";
        if (!is_path_in(g, s)) v.push_back(tag + "not a path in the graph");
        if (s.empty()) continue;
        if (s.front() != star.center) v.push_back(tag + "does not start at the center");
        if (s.back() != star.leaves[m]) v.push_back(tag + "does not end at its leaf");
        if (!marked.contains(star.leaves[m])) v.push_back(tag + "leaf not in U");
        if (!leaves.insert(star.leaves[m]).second) v.push_back(tag + "repeated leaf");
        for (std::size_t x = 1; x < s.size(); ++x)
            if (!used.insert(s[x]).second) v.push_back(tag + "spokes intersect at " + std::to_string(s[x]));
    }
    return v;
}

inline std::vector<std::string> verify_comb(const FiniteGraph& g, const Comb& comb, std::span<const VertexId> u_set,
                                            std::size_t k) {
    std::vector<std::string> v;
    const std::unordered_set<VertexId> marked(u_set.begin(), u_set.end());
    if (!is_path_in(g, comb.spine)) v.push_back("spine is not a path in the graph");
    const std::unordered_set<VertexId> spine(comb.spine.begin(), comb.spine.end());
    if (comb.teeth.size() != k) v.push_back("expected " + std::to_string(k) + " teeth");
    if (comb.attachments.size() != comb.teeth.size()) {
        v.push_back("attachment count differs from tooth count");
        return v;
    }
    std::unordered_set<VertexId> used;
    for (std::size_t m = 0; m < comb.attachments.size(); ++m) {
        const auto& a = comb.attachments[m];
        const auto tag = "attachment " + std::to_string(m) + ": ";
        if (!is_path_in(g, a)) v.push_back(tag + "not a path in the graph");
        if (a.empty()) continue;
        if (!spine.contains(a.front())) v.push_back(tag + "does not start on the spine");
        for (std::size_t x = 1; x < a.size(); ++x)
            if (spine.contains(a[x])) v.push_back(tag + "meets the spine again at " + std::to_string(a[x]));
        if (a.back() != comb.teeth[m]) v.push_back(tag + "does not end at its tooth");
        if (!marked.contains(comb.teeth[m])) v.push_back(tag + "tooth not in U");
        for (auto x : a)
            if (!used.insert(x).second) v.push_back(tag + "attachments intersect at " + std::to_string(x));
    }
    return v;
}

}  // namespace halin
