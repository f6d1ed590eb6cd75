#pragma once

// Edge-list text format and DOT export.
//
//   # comment
//   0 1
//   1 2
//
// One undirected edge per line, two base-10 integers separated by one space.
// Canonical form: smaller endpoint first, lines sorted by (u, v).

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graph_core.hpp"

namespace halin {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

inline FiniteGraph load_edge_list(std::string_view text) {
    std::vector<Edge> edges;
    std::vector<Edge> seen;
    std::vector<std::size_t> line_of;
    auto lines = detail::split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto line = lines[n];
        const auto lineno = n + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto space = line.find(' ');
        VertexId u = 0;
        VertexId v = 0;
        if (space == std::string_view::npos || !detail::parse_u64(line.substr(0, space), u) ||
            !detail::parse_u64(line.substr(space + 1), v))
            throw ParseError(lineno, "expected \"<u> <v>\", got \"" + std::string(line) + "\"");
        if (u == v) throw ParseError(lineno, "loop edge " + std::to_string(u));
        edges.emplace_back(std::min(u, v), std::max(u, v));
        line_of.push_back(lineno);
    }
    std::vector<std::size_t> order(edges.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    for (std::size_t k = 1; k < order.size(); ++k)
        if (edges[order[k]] == edges[order[k - 1]])
            throw ParseError(line_of[order[k]], "duplicate edge " + std::to_string(edges[order[k]].first) + " " +
                                                    std::to_string(edges[order[k]].second));
    return FiniteGraph::from_edges({}, edges);
}

inline std::string store_edge_list(const FiniteGraph& g) {
    std::string out;
    for (const auto& [u, v] : g.edges()) {
        out += std::to_string(u);
        out += ' ';
        out += std::to_string(v);
        out += '\n';
    }
    return out;
}

inline std::string canonical_edge_list(std::string_view text) { return store_edge_list(load_edge_list(text)); }

/// Undirected DOT graph; vertices are labelled "(i,j)" when the graph's ids carry coordinates.
inline std::string to_dot(const FiniteGraph& g, std::string_view name = "G") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    for (auto v : g.vertices()) {
        os << "  " << v;
        if (auto c = label_of(g.labeling(), v)) os << " [label=\"(" << c->i << "," << c->j << ")\"]";
        os << ";\n";
    }
    for (const auto& [u, v] : g.edges()) os << "  " << u << " -- " << v << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace halin
