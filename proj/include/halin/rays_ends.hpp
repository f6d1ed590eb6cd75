#pragma once

// Rays at desk scale (paths that reach the truncation sphere), finite-radius
// end equivalence, and thick-end witness search.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "disjoint_paths.hpp"
#include "ray.hpp"
#include "edge_list.hpp"
#include "graph_core.hpp"

namespace halin {

struct EndWitness {
    VertexId root = 0;
    std::vector<Ray> rays;
    int radius = 0;             ///< R
    int equivalence_radius = 0; ///< r
};

struct RaysNotFound {
    std::size_t best = 0;            ///< largest count achieved
    std::size_t separator_size = 0;  ///< Menger value certifying `best` when flow was the bottleneck
    int radius = 0;
    std::string diagnostic;
};

using RaySearch = std::variant<std::vector<Ray>, RaysNotFound>;
using WitnessSearch = std::variant<EndWitness, RaysNotFound>;

/// Maximum disjoint frontier-path system from ball(root, s) to sphere(root, R),
/// at the smallest s whose Menger value reaches `want`.
struct FrontierSystem {
    std::vector<Ray> rays;
    Separator separator;
    int inner_radius = 0;
};

inline FrontierSystem frontier_system(const Truncation& t, std::size_t want) {
    const auto outer = t.sphere(t.radius);
    FrontierSystem best;
    if (outer.empty() || t.radius == 0) {
        // degenerate truncation: rays are the sphere vertices themselves
        for (auto v : outer) best.rays.push_back(Ray{{v}, true});
        return best;
    }
    for (int s = 0; s < t.radius; ++s) {
        const auto inner = t.ball_vertices(s);
        auto m = menger(t.graph, inner, outer, {}, EndpointPolicy::exclusive);
        best.inner_radius = s;
        best.separator = std::move(m.separator);
        best.rays.clear();
        for (auto& p : m.paths) best.rays.push_back(Ray{std::move(p), true});
        if (best.rays.size() >= want) break;
    }
    return best;
}

inline RaySearch find_disjoint_rays(const LazyGraph& g, VertexId root, std::size_t k, int radius,
                                    std::size_t budget = kDefaultVertexBudget) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (radius < static_cast<int>(k)) throw std::invalid_argument("radius must be at least k");
    const auto t = truncate(g, root, radius, budget);
    auto sys = frontier_system(t, k);
    if (sys.rays.size() >= k) {
        sys.rays.resize(k);
        return sys.rays;
    }
    RaysNotFound nf;
    nf.best = sys.rays.size();
    nf.separator_size = sys.separator.size();
    nf.radius = t.radius;
    nf.diagnostic = "only " + std::to_string(nf.best) + " disjoint rays reach sphere(" + std::to_string(t.radius) +
                    "); separator of size " + std::to_string(nf.separator_size);
    return nf;
}

/// Component labels of ball(R) minus ball(r), used to compare ray tails.
class EndClasses {
  public:
    EndClasses(const Truncation& t, int r) : t_(&t) {
        std::vector<bool> removed(t.graph.size());
        for (std::size_t k = 0; k < removed.size(); ++k) removed[k] = t.distance[k] <= r;
        labels_ = component_labels(t.graph, removed);
    }

    /// Component of the ray's tail beyond ball(r). Throws if the ray is not frontier.
    std::size_t tail_class(const Ray& ray) const {
        if (!ray.frontier || ray.vertices.empty() || t_->distance_of(ray.vertices.back()) != t_->radius)
            throw std::domain_error("ray is not a frontier ray of the truncation");
        return labels_[t_->graph.checked_index(ray.vertices.back())];
    }

    bool same(const Ray& a, const Ray& b) const { return tail_class(a) == tail_class(b); }

  private:
    const Truncation* t_;
    std::vector<std::size_t> labels_;
};

/// True iff the tails of a and b beyond ball(root, r) lie in one component of ball(root, R) - ball(root, r).
inline bool same_end(const Truncation& t, const Ray& a, const Ray& b, int r) {
    if (r < 0 || r >= t.radius) throw std::domain_error("need 0 <= r < R");
    return EndClasses(t, r).same(a, b);
}

inline bool same_end(const LazyGraph& g, VertexId root, const Ray& a, const Ray& b, int r, int radius,
                     std::size_t budget = kDefaultVertexBudget) {
    return same_end(truncate(g, root, radius, budget), a, b, r);
}

inline WitnessSearch thick_end_witness(const Truncation& t, std::size_t k, int r) {
    if (k < 2) throw std::invalid_argument("thick-end witness needs k >= 2");
    if (r < 0 || r >= t.requested_radius) throw std::invalid_argument("need 0 <= r < R");
    const VertexId root = t.root;
    const std::string where = t.clamped() ? " (radius clamped from " + std::to_string(t.requested_radius) + " to " +
                                                std::to_string(t.radius) + " by the vertex budget)"
                                          : std::string{};
    if (t.radius <= r) {
        RaysNotFound nf;
        nf.radius = t.radius;
        nf.diagnostic = "truncation too small for equivalence radius " + std::to_string(r) + where;
        return nf;
    }

    auto sys = frontier_system(t, k);
    const EndClasses classes(t, r);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t idx = 0; idx < sys.rays.size(); ++idx) groups[classes.tail_class(sys.rays[idx])].push_back(idx);
    const std::vector<std::size_t>* largest = nullptr;
    for (const auto& [cls, members] : groups)
        if (!largest || members.size() > largest->size() ||
            (members.size() == largest->size() && members.front() < largest->front()))
            largest = &members;
    const std::size_t best = largest ? largest->size() : 0;

    if (sys.rays.size() < k || best < k) {
        RaysNotFound nf;
        nf.best = best;
        nf.radius = t.radius;
        if (sys.rays.size() < k) {
            nf.separator_size = sys.separator.size();
            nf.diagnostic = "only " + std::to_string(sys.rays.size()) + " disjoint rays reach sphere(" +
                            std::to_string(t.radius) + "); separator of size " +
                            std::to_string(nf.separator_size) + "; best equivalent group " + std::to_string(best);
        } else {
            nf.separator_size = sys.rays.size();
            nf.diagnostic = std::to_string(sys.rays.size()) + " disjoint rays found but at most " +
                            std::to_string(best) + " are pairwise equivalent at radius " + std::to_string(r);
        }
        nf.diagnostic += where;
        return nf;
    }

    EndWitness w;
    w.root = root;
    w.radius = t.radius;
    w.equivalence_radius = r;
    for (std::size_t m = 0; m < k; ++m) w.rays.push_back(sys.rays[(*largest)[m]]);
    return w;
}

inline WitnessSearch thick_end_witness(const LazyGraph& g, VertexId root, std::size_t k, int r, int radius,
                                       std::size_t budget = kDefaultVertexBudget) {
    if (k < 2) throw std::invalid_argument("thick-end witness needs k >= 2");
    if (r < 0 || r >= radius) throw std::invalid_argument("need 0 <= r < R");
    return thick_end_witness(truncate(g, root, radius, budget), k, r);
}

/// Re-checks every EndWitness invariant from scratch; returns human-readable problems.
inline std::vector<std::string> validate_witness(const Truncation& t, const EndWitness& w) {
    std::vector<std::string> problems;
    if (w.radius != t.radius) problems.push_back("witness radius does not match truncation");
    std::unordered_set<VertexId> seen;
    for (std::size_t m = 0; m < w.rays.size(); ++m) {
        const auto& ray = w.rays[m];
        const auto tag = "ray " + std::to_string(m) + ": ";
        if (!is_path_in(t.graph, ray.vertices)) problems.push_back(tag + "not a path in the truncation");
        if (!ray.frontier || ray.vertices.empty() || !t.graph.contains(ray.vertices.back()) ||
            t.distance_of(ray.vertices.back()) != t.radius)
            problems.push_back(tag + "does not end on the sphere");
        for (auto v : ray.vertices)
            if (!seen.insert(v).second) {
                problems.push_back(tag + "meets another ray at " + std::to_string(v));
                break;
            }
    }
    if (!problems.empty()) return problems;
    if (w.equivalence_radius < 0 || w.equivalence_radius >= t.radius) {
        problems.push_back("equivalence radius out of range");
        return problems;
    }
    const EndClasses classes(t, w.equivalence_radius);
    for (std::size_t a = 0; a < w.rays.size(); ++a)
        for (std::size_t b = a + 1; b < w.rays.size(); ++b)
            if (!classes.same(w.rays[a], w.rays[b]))
                problems.push_back("rays " + std::to_string(a) + " and " + std::to_string(b) + " are separated");
    return problems;
}

/// "witness k=<k> r=<r> R=<R>" followed by one ray per line.
inline std::string store_witness(const EndWitness& w) {
    std::ostringstream os;
    os << "witness k=" << w.rays.size() << " r=" << w.equivalence_radius << " R=" << w.radius << "\n";
    for (const auto& ray : w.rays) {
        for (std::size_t k = 0; k < ray.size(); ++k) os << (k ? " " : "") << ray[k];
        os << "\n";
    }
    return os.str();
}

inline EndWitness load_witness(std::string_view text, VertexId root) {
    auto lines = detail::split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty witness");
    EndWitness w;
    w.root = root;
    std::size_t k = 0;
    {
        std::istringstream head{std::string(lines[0])};
        std::string tag, kk, rr, RR;
        head >> tag >> kk >> rr >> RR;
        std::uint64_t kv = 0, rv = 0, Rv = 0;
        if (tag != "witness" || kk.rfind("k=", 0) != 0 || rr.rfind("r=", 0) != 0 || RR.rfind("R=", 0) != 0 ||
            !detail::parse_u64(std::string_view(kk).substr(2), kv) ||
            !detail::parse_u64(std::string_view(rr).substr(2), rv) ||
            !detail::parse_u64(std::string_view(RR).substr(2), Rv))
            throw ParseError(1, "expected \"witness k=<k> r=<r> R=<R>\"");
        k = kv;
        w.equivalence_radius = static_cast<int>(rv);
        w.radius = static_cast<int>(Rv);
    }
    for (std::size_t n = 1; n < lines.size(); ++n) {
        if (lines[n].empty()) continue;
        Ray ray;
        ray.frontier = true;
        std::istringstream is{std::string(lines[n])};
        std::string tok;
        while (is >> tok) {
            std::uint64_t v = 0;
            if (!detail::parse_u64(tok, v)) throw ParseError(n + 1, "bad vertex id \"" + tok + "\"");
            ray.vertices.push_back(v);
        }
        w.rays.push_back(std::move(ray));
    }
    if (w.rays.size() != k) throw ParseError(lines.size(), "header announces " + std::to_string(k) + " rays");
    return w;
}

}  // namespace halin
