#pragma once

// Independent checker for claimed subdivisions of hex prefixes, and a
// single-fault mutator used to fuzz it.

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "embedding.hpp"
#include "graph_core.hpp"

namespace halin {

enum class ViolationKind {
    branch_not_injective,
    path_not_in_host,
    endpoint_mismatch,
    paths_intersect,
    interior_hits_branch,
    pattern_edge_missing,
    branch_missing,    ///< pattern vertex unmapped or mapped outside the host
    unexpected_entry,  ///< branch or path for something that is not in the pattern
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::branch_not_injective: return "branch_not_injective";
        case ViolationKind::path_not_in_host: return "path_not_in_host";
        case ViolationKind::endpoint_mismatch: return "endpoint_mismatch";
        case ViolationKind::paths_intersect: return "paths_intersect";
        case ViolationKind::interior_hits_branch: return "interior_hits_branch";
        case ViolationKind::pattern_edge_missing: return "pattern_edge_missing";
        case ViolationKind::branch_missing: return "branch_missing";
        case ViolationKind::unexpected_entry: return "unexpected_entry";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    Coord at;                 ///< pattern vertex, or first endpoint of a pattern edge
    std::optional<Coord> to;  ///< second endpoint for edge locations

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline std::string describe(const Violation& v) {
    std::string s = to_string(v.kind);
    s += " at (" + std::to_string(v.at.i) + "," + std::to_string(v.at.j) + ")";
    if (v.to) s += "-(" + std::to_string(v.to->i) + "," + std::to_string(v.to->j) + ")";
    return s;
}

/// Empty result means the embedding is a valid subdivision of hex_prefix(emb.pattern) in host.
/// Violations are sorted by location, then kind.
inline std::vector<Violation> verify_embedding(const FiniteGraph& host, const Embedding& emb) {
    std::vector<Violation> out;
    auto at_vertex = [&](ViolationKind k, Coord c) { out.push_back({k, c, std::nullopt}); };
    auto at_edge = [&](ViolationKind k, const PatternEdge& e) { out.push_back({k, e.a, e.b}); };

    if (emb.pattern.cols < 1 || emb.pattern.depth < 1) {
        at_vertex(ViolationKind::branch_missing, Coord{0, 0});
        return out;
    }
    auto in_pattern = [&](Coord c) {
        return c.i >= 0 && c.j >= 0 && c.i < emb.pattern.cols && c.j < emb.pattern.depth;
    };

    // branch vertices
    std::unordered_map<VertexId, Coord> owner;
    std::unordered_set<VertexId> images;
    for (const auto& [c, v] : emb.branch)
        if (!in_pattern(c)) at_vertex(ViolationKind::unexpected_entry, c);
    for (std::int64_t i = 0; i < emb.pattern.cols; ++i)
        for (std::int64_t j = 0; j < emb.pattern.depth; ++j) {
            const Coord c{i, j};
            auto it = emb.branch.find(c);
            if (it == emb.branch.end() || !host.contains(it->second)) {
                at_vertex(ViolationKind::branch_missing, c);
                continue;
            }
            images.insert(it->second);
            if (!owner.emplace(it->second, c).second) at_vertex(ViolationKind::branch_not_injective, c);
        }
    auto image = [&](Coord c) -> std::optional<VertexId> {
        auto it = emb.branch.find(c);
        if (it == emb.branch.end()) return std::nullopt;
        return it->second;
    };

    // canonical form: keys ordered, paths oriented from the smaller endpoint's image
    std::map<PatternEdge, Path> paths;
    for (const auto& [key, raw] : emb.edge_paths) {
        if (key.a == key.b) {
            at_edge(ViolationKind::unexpected_entry, key);
            continue;
        }
        const auto canon = PatternEdge::make(key.a, key.b);
        Path p = raw;
        if (!(canon.a == key.a)) std::reverse(p.begin(), p.end());
        const auto ia = image(canon.a);
        const auto ib = image(canon.b);
        if (!p.empty() && ia && ib && p.front() == *ib && p.back() == *ia) std::reverse(p.begin(), p.end());
        if (!paths.emplace(canon, std::move(p)).second) at_edge(ViolationKind::unexpected_entry, canon);
    }

    std::set<PatternEdge> pattern_edges;
    for (std::int64_t i = 0; i < emb.pattern.cols; ++i)
        for (std::int64_t j = 0; j < emb.pattern.depth; ++j) {
            if (j + 1 < emb.pattern.depth) pattern_edges.insert(PatternEdge::make({i, j}, {i, j + 1}));
            // rung rule, restated here so the checker shares nothing with the extractor
            if (i + 1 < emb.pattern.cols && j >= i && (j - i) % 2 == 0) pattern_edges.insert(PatternEdge::make({i, j}, {i + 1, j}));
        }
    for (const auto& [key, p] : paths)
        if (!pattern_edges.contains(key)) at_edge(ViolationKind::unexpected_entry, key);

    std::unordered_map<VertexId, PatternEdge> interior_owner;
    for (const auto& e : pattern_edges) {
        auto it = paths.find(e);
        if (it == paths.end()) {
            at_edge(ViolationKind::pattern_edge_missing, e);
            continue;
        }
        const Path& p = it->second;
        const auto ia = image(e.a);
        const auto ib = image(e.b);
        if (p.size() < 2 || !ia || !ib || p.front() != *ia || p.back() != *ib)
            at_edge(ViolationKind::endpoint_mismatch, e);

        bool in_host = true;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!host.contains(p[k])) in_host = false;
            if (k + 1 < p.size() && !host.adjacent(p[k], p[k + 1])) in_host = false;
        }
        if (!in_host) at_edge(ViolationKind::path_not_in_host, e);

        std::unordered_set<VertexId> own;
        bool self_crossing = false;
        for (auto v : p)
            if (!own.insert(v).second) self_crossing = true;
        if (self_crossing) at_edge(ViolationKind::paths_intersect, e);

        bool hits_branch = false;
        bool crosses = false;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) {
            if (images.contains(p[k])) hits_branch = true;
            auto [slot, fresh] = interior_owner.emplace(p[k], e);
            if (!fresh && !(slot->second == e)) crosses = true;
        }
        if (hits_branch) at_edge(ViolationKind::interior_hits_branch, e);
        if (crosses) at_edge(ViolationKind::paths_intersect, e);
    }

    auto key = [](const Violation& v) {
        return std::tuple(v.at, v.to.has_value(), v.to.value_or(Coord{}), static_cast<int>(v.kind));
    };
    std::sort(out.begin(), out.end(), [&](const Violation& x, const Violation& y) { return key(x) < key(y); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

enum class Mutation { drop_vertex, swap_branches, splice_paths, delete_path };

/// Deterministic single-fault mutation of a valid embedding, drawn by `seed`.
/// Throws std::invalid_argument if the pattern has no edge (nothing can be broken).
inline Embedding mutate_embedding(const Embedding& emb, std::uint64_t seed, Mutation* applied = nullptr) {
    std::vector<PatternEdge> edges;
    for (const auto& [e, p] : emb.edge_paths) edges.push_back(e);
    if (edges.empty()) throw std::invalid_argument("embedding has no edge paths to mutate");

    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    std::vector<Mutation> kinds{Mutation::drop_vertex, Mutation::delete_path};
    // a swap across the only edge just reverses it, which is not a fault
    if (emb.branch.size() >= 2 && edges.size() >= 2) kinds.push_back(Mutation::swap_branches);
    if (edges.size() >= 2) kinds.push_back(Mutation::splice_paths);
    std::sort(kinds.begin(), kinds.end());
    const auto kind = kinds[pick(kinds.size())];
    if (applied) *applied = kind;

    Embedding m = emb;
    switch (kind) {
        case Mutation::drop_vertex: {
            auto& p = m.edge_paths[edges[pick(edges.size())]];
            if (p.size() >= 2) p.erase(p.begin() + static_cast<std::ptrdiff_t>(1 + pick(p.size() - 1)));
            else p.clear();
            break;
        }
        case Mutation::swap_branches: {
            std::vector<Coord> coords;
            for (const auto& [c, v] : m.branch) coords.push_back(c);
            const auto x = pick(coords.size());
            auto y = pick(coords.size() - 1);
            if (y >= x) ++y;
            std::swap(m.branch[coords[x]], m.branch[coords[y]]);
            break;
        }
        case Mutation::splice_paths: {
            const auto x = pick(edges.size());
            auto y = pick(edges.size() - 1);
            if (y >= x) ++y;
            const Path& donor = m.edge_paths[edges[x]];
            Path& target = m.edge_paths[edges[y]];
            VertexId foreign = 0;
            if (donor.size() > 2) {
                foreign = donor[1 + pick(donor.size() - 2)];
            } else {
                // donor has no interior: borrow an endpoint the target does not use
                const bool front_free = std::find(target.begin(), target.end(), donor.front()) == target.end();
                foreign = front_free ? donor.front() : donor.back();
            }
            if (target.size() > 2) target[1 + pick(target.size() - 2)] = foreign;
            else target.insert(target.begin() + 1, foreign);
            break;
        }
        case Mutation::delete_path:
            m.edge_paths.erase(edges[pick(edges.size())]);
            break;
    }
    return m;
}

}  // namespace halin
