#pragma once

// Hex-prefix subdivisions assembled from disjoint rays.
//
// Columns of the prefix run along rays; rungs are disjoint connecting paths.
// Two drivers feed the shared assembler: a highway ray C with feeder paths
// from each column ray (lemma_construct), and a chain of rays linked
// consecutively by path families (comb_construct). halin_pipeline goes from a
// rooted graph to a verified embedding, choosing the driver from a star or
// comb in the ray-adjacency graph.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "disjoint_paths.hpp"
#include "embedding.hpp"
#include "graph_core.hpp"
#include "ray.hpp"
#include "rays_ends.hpp"
#include "star_comb.hpp"
#include "subdivision_check.hpp"

namespace halin {

/// The construction ran out of room. `stage` names the step that failed.
struct Insufficient {
    std::string stage;
    std::string diagnostic;
};

using Extraction = std::variant<Embedding, Insufficient>;

namespace detail {

inline void require_disjoint(const std::vector<const Ray*>& rays) {
    std::unordered_set<VertexId> seen;
    for (std::size_t m = 0; m < rays.size(); ++m)
        for (auto v : rays[m]->vertices)
            if (!seen.insert(v).second)
                throw std::domain_error("rays are not disjoint (vertex " + std::to_string(v) + ")");
}

inline void require_ray_in(const FiniteGraph& host, const Ray& ray, const std::string& what) {
    if (!is_path_in(host, ray.vertices)) throw std::domain_error(what + " is not a path in the host");
}

/// A rung between columns i and i+1: `path` runs from column i at `left` to column i+1 at `right`.
struct RungChoice {
    std::size_t left = 0;
    std::size_t right = 0;
    Path path;
};

enum class AssemblyStep { admission, rung, placement };

struct AssemblyFailure {
    AssemblyStep step;
    std::int64_t column;
    std::int64_t row;
    std::string diagnostic;
};

/// Row-by-row assembly of a hex prefix along column rays.
///
/// Column i >= 1 joins at row i-1 (columns 0 and 1 at row 0). On joining, the
/// part of its ray after every vertex used so far is reserved, and rows below
/// the joining row are laid out on consecutive vertices. Rungs are placed in
/// ascending column order within a row; a column without a rung in a row takes
/// the next vertex of its ray.
class Assembler {
  public:
    Assembler(std::vector<const Ray*> columns, HexPrefixSpec spec)
        : cols_(std::move(columns)), spec_(spec), cursor_(cols_.size(), -1), admitted_(cols_.size(), false) {
        for (const auto* c : cols_) pos_.push_back(position_index(*c));
        emb_.pattern = spec;
    }

    static std::int64_t admission_row(std::int64_t i) { return i <= 1 ? 0 : i - 1; }

    bool blocked(VertexId v) const { return used_.contains(v) || reserved_.contains(v); }
    bool used(VertexId v) const { return used_.contains(v); }
    std::int64_t cursor(std::size_t i) const { return cursor_[i]; }

    std::optional<std::size_t> position(std::size_t i, VertexId v) const {
        auto it = pos_[i].find(v);
        if (it == pos_[i].end()) return std::nullopt;
        return it->second;
    }

    bool interior_free(const Path& p) const {
        for (std::size_t k = 1; k + 1 < p.size(); ++k)
            if (blocked(p[k])) return false;
        return true;
    }

    /// `pick(i, j, assembler)` returns a RungChoice or a diagnostic string.
    template <class Pick>
    std::variant<Embedding, AssemblyFailure> run(Pick&& pick) {
        const auto ncols = static_cast<std::int64_t>(cols_.size());
        for (std::int64_t j = 0; j < spec_.depth; ++j) {
            for (std::int64_t i = 0; i < ncols; ++i)
                if (!admitted_[i] && admission_row(i) == j)
                    if (auto err = admit(i, j)) return AssemblyFailure{AssemblyStep::admission, i, j, *err};

            std::vector<bool> placed(cols_.size(), false);
            for (std::int64_t i = 0; i + 1 < ncols; ++i) {
                if (!LazyGraph::hex_rung(i, j)) continue;
                std::variant<RungChoice, std::string> got = pick(static_cast<std::size_t>(i), j, *this);
                if (auto* why = std::get_if<std::string>(&got)) return AssemblyFailure{AssemblyStep::rung, i, j, *why};
                auto& rung = std::get<RungChoice>(got);
                const auto& a = *cols_[i];
                const auto& b = *cols_[i + 1];
                if (static_cast<std::int64_t>(rung.left) <= cursor_[i] ||
                    static_cast<std::int64_t>(rung.right) <= cursor_[i + 1] || rung.left >= a.size() ||
                    rung.right >= b.size() || rung.path.size() < 2 || rung.path.front() != a[rung.left] ||
                    rung.path.back() != b[rung.right] || !interior_free(rung.path))
                    throw std::logic_error("rung choice violates the assembly invariants");
                place(i, j, rung.left);
                place(i + 1, j, rung.right);
                for (auto v : rung.path) used_.insert(v);
                emb_.edge_paths[PatternEdge::make({i, j}, {i + 1, j})] = std::move(rung.path);
                placed[i] = placed[i + 1] = true;
            }

            for (std::int64_t i = 0; i < ncols; ++i) {
                if (!admitted_[i] || placed[i]) continue;
                const auto next = cursor_[i] + 1;
                if (next >= static_cast<std::int64_t>(cols_[i]->size()))
                    return AssemblyFailure{AssemblyStep::placement, i, j,
                                           "column " + std::to_string(i) + " ray ends before row " + std::to_string(j)};
                place(i, j, static_cast<std::size_t>(next));
            }
        }
        return emb_;
    }

  private:
    std::optional<std::string> admit(std::int64_t i, std::int64_t j) {
        const Ray& ray = *cols_[i];
        std::size_t start = 0;
        for (std::size_t k = 0; k < ray.size(); ++k)
            if (used_.contains(ray[k])) start = k + 1;
        if (start + static_cast<std::size_t>(j) > ray.size())
            return "column " + std::to_string(i) + " has " + std::to_string(ray.size() - std::min(start, ray.size())) +
                   " free vertices after position " + std::to_string(start) + ", needs " + std::to_string(j);
        for (std::size_t k = start; k < ray.size(); ++k) reserved_.insert(ray[k]);
        admitted_[i] = true;
        for (std::int64_t r = 0; r < j; ++r) place(i, r, start + static_cast<std::size_t>(r));
        return std::nullopt;
    }

    void place(std::int64_t i, std::int64_t j, std::size_t p) {
        const Ray& ray = *cols_[i];
        if (j > 0) {
            Path vertical(ray.vertices.begin() + cursor_[i], ray.vertices.begin() + static_cast<std::ptrdiff_t>(p) + 1);
            for (auto v : vertical) used_.insert(v);
            emb_.edge_paths[PatternEdge::make({i, j - 1}, {i, j})] = std::move(vertical);
        }
        used_.insert(ray[p]);
        emb_.branch[{i, j}] = ray[p];
        cursor_[i] = static_cast<std::int64_t>(p);
    }

    std::vector<const Ray*> cols_;
    HexPrefixSpec spec_;
    std::vector<std::unordered_map<VertexId, std::size_t>> pos_;
    std::vector<std::int64_t> cursor_;
    std::vector<bool> admitted_;
    std::unordered_set<VertexId> used_;
    std::unordered_set<VertexId> reserved_;
    Embedding emb_;
};

inline Path segment(const Ray& ray, std::size_t from, std::size_t to) {
    Path out;
    if (from <= to)
        for (auto k = from; k <= to; ++k) out.push_back(ray[k]);
    else
        for (auto k = from + 1; k-- > to;) out.push_back(ray[k]);
    return out;
}

}  // namespace detail

/// What the highway construction did, for inspection by tests and logs.
struct LemmaTrace {
    Path base_path;  ///< the L_0-C path reaching C lowest
    std::optional<VertexId> c0;
    /// (C position of the column-i end, C position of the column-(i+1) end) per rung, in order.
    std::vector<std::pair<std::size_t, std::size_t>> attachments;
};

/// Hex prefix from a highway ray C, column rays L[0..cols), and for each column j a
/// family P[j] of L[j]-C paths (each meets L[j] only first and C only last).
/// Rung (i, j) runs from L[i] up to C, along C, and back down to L[i+1]; rungs
/// reach C at strictly increasing positions. Stage names: "lemma(a)" base path,
/// "lemma(b)" column start, "lemma(c)" rung attachment, "lemma(d)" column length.
inline Extraction lemma_construct(const FiniteGraph& host, const Ray& c, const std::vector<Ray>& l,
                                  const std::vector<std::vector<Path>>& p, HexPrefixSpec spec,
                                  LemmaTrace* trace = nullptr) {
    if (!spec.valid()) throw std::domain_error("invalid hex-prefix parameters");
    const auto cols = static_cast<std::size_t>(spec.cols);
    if (l.size() < cols) throw std::domain_error("need one column ray per column");
    if (p.size() < cols) throw std::domain_error("need one feeder family per column");
    std::vector<const Ray*> all{&c};
    for (std::size_t m = 0; m < cols; ++m) all.push_back(&l[m]);
    detail::require_disjoint(all);
    detail::require_ray_in(host, c, "highway ray");
    for (std::size_t m = 0; m < cols; ++m) detail::require_ray_in(host, l[m], "column ray " + std::to_string(m));

    const auto c_pos = position_index(c);
    struct Feeder {
        Path path;
        std::size_t l_pos;
        std::size_t c_pos;
    };
    std::vector<std::vector<Feeder>> feeders(cols);
    for (std::size_t m = 0; m < cols; ++m) {
        const auto l_pos = position_index(l[m]);
        for (const auto& raw : p[m]) {
            Path q = raw;
            if (!q.empty() && c_pos.contains(q.front()) && l_pos.contains(q.back())) std::reverse(q.begin(), q.end());
            if (q.empty() || !l_pos.contains(q.front()) || !c_pos.contains(q.back()) || !is_path_in(host, q))
                throw std::domain_error("feeder path for column " + std::to_string(m) + " does not join L to C");
            for (std::size_t k = 1; k < q.size(); ++k)
                if (l_pos.contains(q[k])) throw std::domain_error("feeder path re-enters its column ray");
            for (std::size_t k = 0; k + 1 < q.size(); ++k)
                if (c_pos.contains(q[k])) throw std::domain_error("feeder path meets C before its end");
            feeders[m].push_back({q, l_pos.at(q.front()), c_pos.at(q.back())});
        }
        std::stable_sort(feeders[m].begin(), feeders[m].end(),
                         [](const Feeder& x, const Feeder& y) { return x.c_pos < y.c_pos; });
    }

    LemmaTrace local;
    LemmaTrace& tr = trace ? *trace : local;
    tr = {};
    if (!feeders[0].empty()) {
        tr.base_path = feeders[0].front().path;
        tr.c0 = tr.base_path.back();
    } else if (cols > 1) {
        return Insufficient{"lemma(a)", "column 0 has no path to C"};
    }

    std::vector<std::vector<bool>> taken(cols);
    for (std::size_t m = 0; m < cols; ++m) taken[m].assign(feeders[m].size(), false);
    std::int64_t c_cursor = -1;

    auto pick = [&](std::size_t i, std::int64_t j, const detail::Assembler& as)
        -> std::variant<detail::RungChoice, std::string> {
        const bool base_rung = i == 0 && j == 0;
        for (std::size_t a = 0; a < feeders[i].size(); ++a) {
            if (base_rung && a > 0) break;
            const auto& f = feeders[i][a];
            if (taken[i][a] || static_cast<std::int64_t>(f.c_pos) <= c_cursor ||
                static_cast<std::int64_t>(f.l_pos) <= as.cursor(i) || as.used(f.path.front()) ||
                !as.interior_free(f.path))
                continue;
            const std::unordered_set<VertexId> left_side(f.path.begin(), f.path.end());
            for (std::size_t b = 0; b < feeders[i + 1].size(); ++b) {
                const auto& g = feeders[i + 1][b];
                if (taken[i + 1][b] || g.c_pos <= f.c_pos || static_cast<std::int64_t>(g.l_pos) <= as.cursor(i + 1) ||
                    as.used(g.path.front()) || !as.interior_free(g.path))
                    continue;
                bool clash = false;
                for (auto v : g.path) clash = clash || left_side.contains(v);
                if (clash) continue;
                detail::RungChoice rung;
                rung.left = f.l_pos;
                rung.right = g.l_pos;
                rung.path = f.path;
                for (auto k = f.c_pos + 1; k < g.c_pos; ++k) rung.path.push_back(c[k]);
                rung.path.insert(rung.path.end(), g.path.rbegin(), g.path.rend());
                taken[i][a] = taken[i + 1][b] = true;
                c_cursor = static_cast<std::int64_t>(g.c_pos);
                tr.attachments.emplace_back(f.c_pos, g.c_pos);
                return rung;
            }
            if (base_rung)
                return "no column 1 path reaches C above the base path (C position " + std::to_string(f.c_pos) + ")";
        }
        if (base_rung) return std::string("base path is blocked by column 1");
        return "no free pair of paths from columns " + std::to_string(i) + " and " + std::to_string(i + 1) +
               " reaches C above position " + std::to_string(c_cursor);
    };

    std::vector<const Ray*> columns;
    for (std::size_t m = 0; m < cols; ++m) columns.push_back(&l[m]);
    auto got = detail::Assembler(columns, spec).run(pick);
    if (auto* e = std::get_if<Embedding>(&got)) return std::move(*e);
    const auto& fail = std::get<detail::AssemblyFailure>(got);
    std::string stage = "lemma(d)";
    if (fail.step == detail::AssemblyStep::admission) stage = "lemma(b)";
    if (fail.step == detail::AssemblyStep::rung) stage = "lemma(c)";
    return Insufficient{stage, "row " + std::to_string(fail.row) + ": " + fail.diagnostic};
}

/// Hex prefix from a chain of rays where families[i] holds disjoint chain[i]-chain[i+1]
/// paths. Rungs between columns i and i+1 are taken from families[i] in order of
/// where they land on chain[i+1]. Stage names: "comb column i->i+1" for rungs,
/// "comb column i" for column placement.
inline Extraction comb_construct(const FiniteGraph& host, const std::vector<Ray>& chain,
                                 const std::vector<std::vector<Path>>& families, HexPrefixSpec spec) {
    if (!spec.valid()) throw std::domain_error("invalid hex-prefix parameters");
    const auto cols = static_cast<std::size_t>(spec.cols);
    if (chain.size() < cols) throw std::domain_error("chain has fewer rays than columns");
    if (families.size() + 1 < cols) throw std::domain_error("need a family between each pair of consecutive columns");
    std::vector<const Ray*> columns;
    for (std::size_t m = 0; m < cols; ++m) columns.push_back(&chain[m]);
    detail::require_disjoint(columns);
    for (std::size_t m = 0; m < cols; ++m) detail::require_ray_in(host, chain[m], "chain ray " + std::to_string(m));

    struct Link {
        Path path;
        std::size_t from;
        std::size_t to;
    };
    std::vector<std::vector<Link>> links(cols > 0 ? cols - 1 : 0);
    for (std::size_t m = 0; m + 1 < cols; ++m) {
        const auto a = position_index(chain[m]);
        const auto b = position_index(chain[m + 1]);
        for (const auto& raw : families[m]) {
            Path q = raw;
            if (!q.empty() && b.contains(q.front()) && a.contains(q.back())) std::reverse(q.begin(), q.end());
            if (q.size() < 2 || !a.contains(q.front()) || !b.contains(q.back()) || !is_path_in(host, q))
                throw std::domain_error("family " + std::to_string(m) + " has a path not joining its rays");
            for (std::size_t k = 1; k + 1 < q.size(); ++k)
                if (a.contains(q[k]) || b.contains(q[k]))
                    throw std::domain_error("family " + std::to_string(m) + " has a path meeting its rays inside");
            links[m].push_back({q, a.at(q.front()), b.at(q.back())});
        }
        std::stable_sort(links[m].begin(), links[m].end(), [](const Link& x, const Link& y) { return x.to < y.to; });
    }
    std::vector<std::vector<bool>> taken(links.size());
    for (std::size_t m = 0; m < links.size(); ++m) taken[m].assign(links[m].size(), false);

    auto pick = [&](std::size_t i, std::int64_t, const detail::Assembler& as)
        -> std::variant<detail::RungChoice, std::string> {
        for (std::size_t a = 0; a < links[i].size(); ++a) {
            const auto& lk = links[i][a];
            if (taken[i][a] || static_cast<std::int64_t>(lk.from) <= as.cursor(i) ||
                static_cast<std::int64_t>(lk.to) <= as.cursor(i + 1) || as.used(lk.path.front()) ||
                as.used(lk.path.back()) || !as.interior_free(lk.path))
                continue;
            taken[i][a] = true;
            return detail::RungChoice{lk.from, lk.to, lk.path};
        }
        return "family " + std::to_string(i) + " has no free path above positions " + std::to_string(as.cursor(i)) +
               " and " + std::to_string(as.cursor(i + 1));
    };

    auto got = detail::Assembler(columns, spec).run(pick);
    if (auto* e = std::get_if<Embedding>(&got)) return std::move(*e);
    const auto& fail = std::get<detail::AssemblyFailure>(got);
    std::string stage = "comb column " + std::to_string(fail.column);
    if (fail.step == detail::AssemblyStep::rung) stage += "->" + std::to_string(fail.column + 1);
    return Insufficient{stage, "row " + std::to_string(fail.row) + ": " + fail.diagnostic};
}

/// A family was moved from one ray to another while attaching a new ray.
struct RerouteEvent {
    std::size_t ray = 0;   ///< adjacency index of the ray being attached
    std::size_t from = 0;  ///< ray the family started on
    std::size_t to = 0;    ///< ray it was rerouted to
    std::vector<VertexId> cut_points;  ///< where each kept path last met `to`
};

struct RayLink {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<Path> paths;  ///< disjoint, each listed from ray `from` to ray `to`
};

/// Rays linked by at least t disjoint paths with no interior vertex on any ray of the structure.
struct RayAdjacency {
    std::vector<Ray> rays;                   ///< in admission order
    std::vector<std::size_t> witness_index;  ///< rays[m] is witness ray witness_index[m]
    std::map<std::pair<std::size_t, std::size_t>, RayLink> links;  ///< keyed (smaller, larger)
    std::vector<RerouteEvent> reroutes;
    std::vector<std::string> dropped;  ///< one line per witness ray that could not be attached
    std::size_t t = 0;

    FiniteGraph as_graph() const {
        std::vector<VertexId> vs(rays.size());
        for (std::size_t m = 0; m < vs.size(); ++m) vs[m] = m;
        std::vector<Edge> es;
        for (const auto& [key, link] : links) es.emplace_back(key.first, key.second);
        return FiniteGraph::from_edges(std::move(vs), es);
    }

    /// The family between rays a and b, listed from a. Throws if they are not linked.
    std::vector<Path> family(std::size_t a, std::size_t b) const {
        auto it = links.find({std::min(a, b), std::max(a, b)});
        if (it == links.end()) throw std::out_of_range("rays are not linked");
        auto out = it->second.paths;
        if (it->second.from != a)
            for (auto& p : out) std::reverse(p.begin(), p.end());
        return out;
    }
};

/// Builds the ray-adjacency structure on the witness rays inside `host`.
///
/// Rays are attached one at a time in witness order. A new ray first tries the
/// most recently attached ray, then the others newest first. When at least t
/// paths of the family meet some other attached ray inside, the family is cut
/// down to its segments after that ray and the attempt continues from there.
/// A ray no candidate accepts is retried once all others have been tried; what
/// still fails is listed in `dropped`.
inline RayAdjacency build_ray_adjacency(const Truncation& host, const EndWitness& w, std::size_t t) {
    if (t < 1) throw std::invalid_argument("t must be positive");
    if (w.rays.empty()) throw std::domain_error("witness has no rays");
    std::vector<const Ray*> all;
    for (const auto& r : w.rays) {
        detail::require_ray_in(host.graph, r, "witness ray");
        all.push_back(&r);
    }
    detail::require_disjoint(all);

    RayAdjacency adj;
    adj.t = t;
    std::unordered_map<VertexId, std::size_t> owner;  // vertex -> adjacency index
    auto admit = [&](std::size_t wi) {
        const auto idx = adj.rays.size();
        adj.rays.push_back(w.rays[wi]);
        adj.witness_index.push_back(wi);
        for (auto v : w.rays[wi].vertices) owner.emplace(v, idx);
    };
    admit(0);

    struct Attempt {
        bool ok = false;
        std::size_t target = 0;
        std::vector<Path> paths;
        std::vector<RerouteEvent> events;
        std::string why;
    };
    auto attempt = [&](std::size_t wi, std::size_t start, const std::vector<bool>& admitted) {
        Attempt out;
        std::vector<VertexId> forbidden;
        for (std::size_t m = 0; m < w.rays.size(); ++m)
            if (m != wi && !admitted[m]) forbidden.insert(forbidden.end(), w.rays[m].vertices.begin(), w.rays[m].vertices.end());
        auto found = connecting_family(host.graph, adj.rays[start], w.rays[wi], 1, forbidden);
        if (std::holds_alternative<FamilyShortfall>(found)) {
            out.why = "no path to ray " + std::to_string(start);
            return out;
        }
        auto paths = std::get<std::vector<Path>>(std::move(found));
        std::size_t current = start;
        std::vector<bool> visited(adj.rays.size(), false);
        visited[start] = true;
        for (;;) {
            std::vector<std::size_t> hits(adj.rays.size(), 0);
            for (const auto& p : paths) {
                std::vector<bool> seen(adj.rays.size(), false);
                for (std::size_t k = 1; k + 1 < p.size(); ++k) {
                    auto it = owner.find(p[k]);
                    if (it != owner.end() && !visited[it->second] && !seen[it->second]) {
                        seen[it->second] = true;
                        ++hits[it->second];
                    }
                }
            }
            std::optional<std::size_t> next;
            for (std::size_t m = 0; m < hits.size(); ++m)
                if (hits[m] >= t && (!next || hits[m] > hits[*next])) next = m;
            if (!next) break;

            RerouteEvent ev;
            ev.from = current;
            ev.to = *next;
            std::vector<Path> cut;
            for (const auto& p : paths) {
                std::optional<std::size_t> last;
                for (std::size_t k = 1; k + 1 < p.size(); ++k) {
                    auto it = owner.find(p[k]);
                    if (it != owner.end() && it->second == *next) last = k;
                }
                if (!last) continue;
                ev.cut_points.push_back(p[*last]);
                cut.emplace_back(p.begin() + static_cast<std::ptrdiff_t>(*last), p.end());
            }
            out.events.push_back(std::move(ev));
            paths = std::move(cut);
            current = *next;
            visited[current] = true;
        }

        std::vector<Path> clean;
        for (auto& p : paths) {
            bool ok = true;
            for (std::size_t k = 1; k + 1 < p.size() && ok; ++k) ok = !owner.contains(p[k]);
            if (ok) clean.push_back(std::move(p));
        }
        out.target = current;
        if (clean.size() >= t) {
            out.ok = true;
            out.paths = std::move(clean);
        } else {
            out.why = "ray " + std::to_string(current) + " offers " + std::to_string(clean.size()) +
                      " clean paths, need " + std::to_string(t);
        }
        return out;
    };

    std::vector<bool> admitted(w.rays.size(), false);
    admitted[0] = true;
    std::vector<std::size_t> pending;
    for (std::size_t m = 1; m < w.rays.size(); ++m) pending.push_back(m);
    std::map<std::size_t, std::string> last_failure;
    // first pass plus one retry pass over whatever was left behind
    for (int pass = 0; pass < 2 && !pending.empty(); ++pass) {
        std::vector<std::size_t> left;
        for (auto wi : pending) {
            std::string reasons;
            bool attached = false;
            for (std::size_t c = adj.rays.size(); c-- > 0;) {
                auto a = attempt(wi, c, admitted);
                if (!a.ok) {
                    reasons += (reasons.empty() ? "" : "; ") + a.why;
                    continue;
                }
                const auto idx = adj.rays.size();
                admit(wi);
                admitted[wi] = true;
                for (auto& ev : a.events) {
                    ev.ray = idx;
                    adj.reroutes.push_back(std::move(ev));
                }
                adj.links[{a.target, idx}] = RayLink{a.target, idx, std::move(a.paths)};
                attached = true;
                break;
            }
            if (!attached) {
                left.push_back(wi);
                last_failure[wi] = reasons;
            }
        }
        pending = std::move(left);
    }
    for (auto wi : pending)
        adj.dropped.push_back("witness ray " + std::to_string(wi) + " dropped: " + last_failure[wi]);
    return adj;
}

inline RayAdjacency build_ray_adjacency(const LazyGraph& g, const EndWitness& w, std::size_t t, int radius,
                                       std::size_t budget = kDefaultVertexBudget) {
    return build_ray_adjacency(truncate(g, w.root, radius, budget), w, t);
}

namespace detail {

/// Chains the families along `hops` (adjacency indices) into paths from the first
/// ray to the last, joining consecutive families by walking the shared ray.
/// Compositions that repeat a vertex are discarded.
inline std::vector<Path> compose_families(const RayAdjacency& adj, const std::vector<std::size_t>& hops) {
    if (hops.size() < 2) return {};
    auto current = adj.family(hops[0], hops[1]);
    for (std::size_t h = 1; h + 1 < hops.size(); ++h) {
        const Ray& via = adj.rays[hops[h]];
        const auto pos = position_index(via);
        auto next = adj.family(hops[h], hops[h + 1]);
        std::vector<bool> taken(next.size(), false);
        std::stable_sort(current.begin(), current.end(),
                         [&](const Path& x, const Path& y) { return pos.at(x.back()) < pos.at(y.back()); });
        std::vector<Path> joined;
        for (const auto& p : current) {
            const auto here = pos.at(p.back());
            std::optional<std::size_t> best;
            std::size_t best_gap = 0;
            for (std::size_t m = 0; m < next.size(); ++m) {
                if (taken[m]) continue;
                const auto there = pos.at(next[m].front());
                const auto gap = there > here ? there - here : here - there;
                if (!best || gap < best_gap || (gap == best_gap && there < pos.at(next[*best].front()))) {
                    best = m;
                    best_gap = gap;
                }
            }
            if (!best) break;
            Path q = p;
            auto walk = segment(via, here, pos.at(next[*best].front()));
            q.insert(q.end(), walk.begin() + 1, walk.end());
            q.insert(q.end(), next[*best].begin() + 1, next[*best].end());
            std::unordered_set<VertexId> seen(q.begin(), q.end());
            if (seen.size() != q.size()) continue;
            taken[*best] = true;
            joined.push_back(std::move(q));
        }
        current = std::move(joined);
    }
    return current;
}

}  // namespace detail

enum class ExtractionCase { none, direct, star, comb };

inline const char* to_string(ExtractionCase c) {
    switch (c) {
        case ExtractionCase::none: return "none";
        case ExtractionCase::direct: return "direct";
        case ExtractionCase::star: return "star";
        case ExtractionCase::comb: return "comb";
    }
    return "?";
}

struct PipelineParams {
    std::size_t k = 2;  ///< rays in the thick-end witness
    int r = 1;          ///< equivalence radius
    int radius = 8;     ///< truncation radius R
    std::size_t t = 1;  ///< paths required per ray link
    HexPrefixSpec spec;
    std::size_t budget = kDefaultVertexBudget;
};

struct ExtractionReport {
    std::string family;
    VertexId root = 0;
    PipelineParams params;
    Extraction outcome = Insufficient{};
    ExtractionCase taken = ExtractionCase::none;
    std::vector<std::string> log;
    Truncation host;
    std::optional<EndWitness> witness;
    std::optional<RayAdjacency> adjacency;

    bool ok() const { return std::holds_alternative<Embedding>(outcome); }
    const Embedding* embedding() const { return std::get_if<Embedding>(&outcome); }
};

namespace detail {

inline void check_params(const PipelineParams& params) {
    if (!params.spec.valid()) throw std::invalid_argument("invalid hex-prefix parameters");
    if (params.t < 1) throw std::invalid_argument("t must be positive");
    if (params.k < 2) throw std::invalid_argument("k must be at least 2");
    if (params.r < 0 || params.r >= params.radius) throw std::invalid_argument("need 0 <= r < R");
}

inline ExtractionReport& fail_report(ExtractionReport& rep, std::string stage, std::string why) {
    rep.log.push_back("failed at " + stage + ": " + why);
    rep.outcome = Insufficient{std::move(stage), std::move(why)};
    return rep;
}

inline ExtractionReport& finish_report(ExtractionReport& rep, Extraction got, ExtractionCase c) {
    rep.taken = c;
    if (auto* ins = std::get_if<Insufficient>(&got)) return fail_report(rep, ins->stage, ins->diagnostic);
    const auto problems = verify_embedding(rep.host.graph, std::get<Embedding>(got));
    if (!problems.empty()) return fail_report(rep, "verify", describe(problems.front()));
    rep.outcome = std::move(got);
    rep.log.push_back(std::string("embedded via ") + to_string(c));
    return rep;
}

/// Everything after the witness: ray adjacency, star or comb, construction, verification.
inline void extract_into(ExtractionReport& rep) {
    const auto& params = rep.params;
    const auto cols = static_cast<std::size_t>(params.spec.cols);
    const auto& w = *rep.witness;
    if (cols > w.rays.size()) {
        fail_report(rep, "parameters", "cols " + std::to_string(cols) + " exceeds the " +
                                           std::to_string(w.rays.size()) + " witness rays");
        return;
    }
    if (cols == 1) {
        finish_report(rep, comb_construct(rep.host.graph, {w.rays[0]}, {}, params.spec), ExtractionCase::direct);
        return;
    }

    rep.adjacency = build_ray_adjacency(rep.host, w, params.t);
    const auto& adj = *rep.adjacency;
    rep.log.push_back("ray adjacency: " + std::to_string(adj.rays.size()) + " rays, " +
                      std::to_string(adj.links.size()) + " links, " + std::to_string(adj.reroutes.size()) +
                      " reroutes");
    for (const auto& d : adj.dropped) rep.log.push_back(d);
    if (adj.rays.size() < cols) {
        fail_report(rep, "adjacency", "only " + std::to_string(adj.rays.size()) + " rays could be linked");
        return;
    }

    const auto fg = adj.as_graph();
    std::vector<VertexId> everyone(adj.rays.size());
    for (std::size_t m = 0; m < everyone.size(); ++m) everyone[m] = m;
    const auto sc = star_or_comb(fg, everyone, cols, StarCombOptions{false});

    if (const auto* ex = std::get_if<Exhausted>(&sc)) {
        fail_report(rep, "star_comb", "largest star " + std::to_string(ex->best_star) + ", longest comb " +
                                          std::to_string(ex->best_comb) + ", need " + std::to_string(cols));
        return;
    }

    if (const auto* comb = std::get_if<Comb>(&sc)) {
        std::vector<Ray> chain;
        std::vector<std::vector<Path>> families;
        for (std::size_t m = 0; m < comb->spine.size(); ++m) {
            chain.push_back(adj.rays[comb->spine[m]]);
            if (m + 1 < comb->spine.size()) families.push_back(adj.family(comb->spine[m], comb->spine[m + 1]));
        }
        rep.log.push_back("comb spine of " + std::to_string(chain.size()) + " rays");
        finish_report(rep, comb_construct(rep.host.graph, chain, families, params.spec), ExtractionCase::comb);
        return;
    }

    const auto& star = std::get<Star>(sc);
    rep.log.push_back("star centred on ray " + std::to_string(star.center) + " with " +
                      std::to_string(star.leaves.size()) + " leaves");
    const Ray& centre = adj.rays[star.center];
    const auto cp = position_index(centre);
    std::vector<Ray> columns;
    std::vector<std::vector<Path>> feeders;
    for (std::size_t m = 0; m < cols; ++m) {
        const auto& spoke = star.spokes[m];
        std::vector<std::size_t> hops(spoke.rbegin(), spoke.rend());
        columns.push_back(adj.rays[hops.front()]);
        // keep only compositions touching the leaf ray and the centre ray at their ends
        const auto lp = position_index(columns.back());
        std::vector<Path> kept;
        for (auto& p : compose_families(adj, hops)) {
            bool ok = p.size() >= 2;
            for (std::size_t k = 1; k < p.size() && ok; ++k) ok = !lp.contains(p[k]);
            for (std::size_t k = 0; k + 1 < p.size() && ok; ++k) ok = !cp.contains(p[k]);
            if (ok) kept.push_back(std::move(p));
        }
        feeders.push_back(std::move(kept));
    }
    finish_report(rep, lemma_construct(rep.host.graph, centre, columns, feeders, params.spec), ExtractionCase::star);
}

}  // namespace detail

/// Runs the extraction on a given witness inside `host`, skipping the witness search.
/// params.k, r and radius are echoed only; the witness decides the rays.
inline ExtractionReport extract_from_witness(Truncation host, EndWitness witness, const PipelineParams& params,
                                             std::string family = "file") {
    if (!params.spec.valid()) throw std::invalid_argument("invalid hex-prefix parameters");
    if (params.t < 1) throw std::invalid_argument("t must be positive");
    ExtractionReport rep;
    rep.family = std::move(family);
    rep.root = host.root;
    rep.params = params;
    rep.host = std::move(host);
    rep.witness = std::move(witness);
    detail::extract_into(rep);
    return rep;
}

/// Witness, ray adjacency, star or comb, then the matching construction; the
/// result is re-checked with verify_embedding before it is reported as a success.
inline ExtractionReport halin_pipeline(const LazyGraph& g, VertexId root, const PipelineParams& params) {
    detail::check_params(params);
    ExtractionReport rep;
    rep.family = g.name();
    rep.root = root;
    rep.params = params;

    const auto cols = static_cast<std::size_t>(params.spec.cols);
    if (cols > params.k) {
        detail::fail_report(rep, "parameters", "cols " + std::to_string(cols) + " exceeds k " + std::to_string(params.k));
        return rep;
    }

    rep.host = truncate(g, root, params.radius, params.budget);
    rep.log.push_back("truncated to radius " + std::to_string(rep.host.radius) + " with " +
                      std::to_string(rep.host.graph.size()) + " vertices" +
                      (rep.host.clamped() ? " (clamped by the vertex budget)" : ""));

    auto search = thick_end_witness(rep.host, params.k, params.r);
    if (auto* nf = std::get_if<RaysNotFound>(&search)) {
        detail::fail_report(rep, "witness", nf->diagnostic);
        return rep;
    }
    rep.witness = std::get<EndWitness>(std::move(search));
    rep.log.push_back("witness with " + std::to_string(rep.witness->rays.size()) + " rays");
    detail::extract_into(rep);
    return rep;
}

/// Plain-text report: parameters, log, then the certificate or the failure.
inline std::string store_report(const ExtractionReport& rep) {
    std::ostringstream os;
    os << "report family=" << rep.family << " root=" << rep.root << " k=" << rep.params.k << " r=" << rep.params.r
       << " R=" << rep.params.radius << " t=" << rep.params.t << " cols=" << rep.params.spec.cols
       << " depth=" << rep.params.spec.depth << "\n";
    for (const auto& line : rep.log) os << "log " << line << "\n";
    if (const auto* e = rep.embedding()) {
        os << "outcome embedded case=" << to_string(rep.taken) << "\n" << store_certificate(*e);
    } else {
        const auto& ins = std::get<Insufficient>(rep.outcome);
        os << "outcome insufficient stage=" << ins.stage << "\n" << "reason " << ins.diagnostic << "\n";
    }
    return os.str();
}

/// Reads k disjoint rays back out of a valid embedding: columns 0..k-1, each
/// extended from its top branch vertex to the sphere by disjoint paths that avoid
/// the rest of the columns. The result is checked with validate_witness.
inline EndWitness witness_from_embedding(const Truncation& host, const Embedding& emb, std::size_t k, int r) {
    if (!verify_embedding(host.graph, emb).empty()) throw std::domain_error("embedding is not valid in the host");
    if (k < 1 || static_cast<std::int64_t>(k) > emb.pattern.cols) throw std::domain_error("need 1 <= k <= cols");

    std::vector<Path> cols(k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto ci = static_cast<std::int64_t>(i);
        cols[i].push_back(emb.branch.at({ci, 0}));
        for (std::int64_t j = 0; j + 1 < emb.pattern.depth; ++j) {
            const auto& p = emb.edge_paths.at(PatternEdge::make({ci, j}, {ci, j + 1}));
            cols[i].insert(cols[i].end(), p.begin() + 1, p.end());
        }
    }
    std::vector<VertexId> ends, forbidden;
    for (const auto& c : cols) {
        ends.push_back(c.back());
        forbidden.insert(forbidden.end(), c.begin(), c.end() - 1);
    }
    const auto sphere = host.sphere(host.radius);
    if (sphere.empty()) throw std::runtime_error("truncation has an empty sphere");
    const auto ext = menger(host.graph, ends, sphere, forbidden, EndpointPolicy::exclusive);
    if (ext.paths.size() < k)
        throw std::runtime_error("only " + std::to_string(ext.paths.size()) + " columns extend to the sphere");

    EndWitness w;
    w.root = host.root;
    w.radius = host.radius;
    w.equivalence_radius = r;
    for (std::size_t i = 0; i < k; ++i) {
        Ray ray{cols[i], true};
        for (const auto& p : ext.paths)
            if (p.front() == cols[i].back()) ray.vertices.insert(ray.vertices.end(), p.begin() + 1, p.end());
        w.rays.push_back(std::move(ray));
    }
    const auto problems = validate_witness(host, w);
    if (!problems.empty()) throw std::runtime_error("recovered rays fail validation: " + problems.front());
    return w;
}

}  // namespace halin
