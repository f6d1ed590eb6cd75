#pragma once

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "graph_core.hpp"

namespace halin {

/// A ray prefix. The natural order on the ray is index order.
struct Ray {
    std::vector<VertexId> vertices;
    bool frontier = false;  ///< last vertex lies on the truncation sphere

    std::size_t size() const { return vertices.size(); }
    VertexId operator[](std::size_t k) const { return vertices[k]; }

    std::optional<std::size_t> position(VertexId v) const {
        auto it = std::find(vertices.begin(), vertices.end(), v);
        if (it == vertices.end()) return std::nullopt;
        return static_cast<std::size_t>(it - vertices.begin());
    }

    friend bool operator==(const Ray&, const Ray&) = default;
};

/// Vertex -> position lookup over a ray.
inline std::unordered_map<VertexId, std::size_t> position_index(const Ray& r) {
    std::unordered_map<VertexId, std::size_t> pos;
    pos.reserve(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) pos.emplace(r[k], k);
    return pos;
}

}  // namespace halin
