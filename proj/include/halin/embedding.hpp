#pragma once

// Topological-minor embeddings of hex prefixes and their certificate text format.
//
//   hexprefix cols=<n> depth=<d>
//   b <i> <j> <hostId>                          one per pattern vertex, sorted by (i, j)
//   p <i> <j> <i'> <j'> : <hostId> <hostId> ...  one per pattern edge, sorted, path from (i,j)

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "disjoint_paths.hpp"
#include "edge_list.hpp"
#include "graph_core.hpp"

namespace halin {

/// Undirected pattern edge stored with its smaller endpoint first.
struct PatternEdge {
    Coord a;
    Coord b;

    static PatternEdge make(Coord x, Coord y) { return x < y ? PatternEdge{x, y} : PatternEdge{y, x}; }

    friend auto operator<=>(const PatternEdge&, const PatternEdge&) = default;
};

struct Embedding {
    HexPrefixSpec pattern;
    std::map<Coord, VertexId> branch;
    std::map<PatternEdge, Path> edge_paths;  ///< each path listed from edge.a to edge.b

    friend bool operator==(const Embedding&, const Embedding&) = default;
};

inline std::string store_certificate(const Embedding& e) {
    std::ostringstream os;
    os << "hexprefix cols=" << e.pattern.cols << " depth=" << e.pattern.depth << "\n";
    for (const auto& [c, v] : e.branch) os << "b " << c.i << " " << c.j << " " << v << "\n";
    for (const auto& [edge, path] : e.edge_paths) {
        os << "p " << edge.a.i << " " << edge.a.j << " " << edge.b.i << " " << edge.b.j << " :";
        for (auto v : path) os << " " << v;
        os << "\n";
    }
    return os.str();
}

/// Parses a certificate. Edge keys are normalised; a path keyed (i',j')->(i,j) is reversed.
inline Embedding load_certificate(std::string_view text) {
    auto lines = detail::split_lines(text);
    Embedding e;
    bool have_header = false;
    auto number = [](std::istringstream& is, std::size_t lineno) {
        std::string tok;
        std::int64_t value = 0;
        if (!(is >> tok)) throw ParseError(lineno, "missing field");
        try {
            std::size_t used = 0;
            value = std::stoll(tok, &used);
            if (used != tok.size()) throw ParseError(lineno, "bad integer \"" + tok + "\"");
        } catch (const std::logic_error&) {
            throw ParseError(lineno, "bad integer \"" + tok + "\"");
        }
        return value;
    };
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto lineno = n + 1;
        const std::string line(lines[n]);
        if (line.empty() || line.front() == '#') continue;
        std::istringstream is(line);
        std::string tag;
        is >> tag;
        if (!have_header) {
            std::string cols, depth;
            is >> cols >> depth;
            std::uint64_t c = 0, d = 0;
            if (tag != "hexprefix" || cols.rfind("cols=", 0) != 0 || depth.rfind("depth=", 0) != 0 ||
                !detail::parse_u64(std::string_view(cols).substr(5), c) ||
                !detail::parse_u64(std::string_view(depth).substr(6), d))
                throw ParseError(lineno, "expected \"hexprefix cols=<n> depth=<d>\"");
            e.pattern = {static_cast<std::int64_t>(c), static_cast<std::int64_t>(d)};
            have_header = true;
        } else if (tag == "b") {
            Coord c{number(is, lineno), number(is, lineno)};
            std::string tok;
            std::uint64_t v = 0;
            if (!(is >> tok) || !detail::parse_u64(tok, v)) throw ParseError(lineno, "bad host vertex");
            if (!e.branch.emplace(c, v).second) throw ParseError(lineno, "duplicate branch vertex");
        } else if (tag == "p") {
            Coord x{number(is, lineno), number(is, lineno)};
            Coord y{number(is, lineno), number(is, lineno)};
            std::string colon;
            if (!(is >> colon) || colon != ":") throw ParseError(lineno, "expected ':'");
            Path p;
            std::string tok;
            while (is >> tok) {
                std::uint64_t v = 0;
                if (!detail::parse_u64(tok, v)) throw ParseError(lineno, "bad host vertex \"" + tok + "\"");
                p.push_back(v);
            }
            const auto key = PatternEdge::make(x, y);
            if (!(key.a == x)) std::reverse(p.begin(), p.end());
            if (!e.edge_paths.emplace(key, std::move(p)).second) throw ParseError(lineno, "duplicate edge path");
        } else {
            throw ParseError(lineno, "unknown record \"" + tag + "\"");
        }
    }
    if (!have_header) throw ParseError(1, "missing header");
    return e;
}

}  // namespace halin
