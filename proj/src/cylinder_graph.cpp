#include "cyltree/cylinder_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "union_find.hpp"

namespace cyltree {

CylinderGraph::CylinderGraph(std::uint32_t n, std::uint32_t m, bool with_sink)
    : n_(n), m_(m), has_sink_(with_sink) {
    if (n < 3) throw std::invalid_argument("cylinder: circumference n must be >= 3");
    if (m < 1) throw std::invalid_argument("cylinder: length m must be >= 1");

    vertex_count_ = n * m + (with_sink ? 1u : 0u);

    // Fixed edge order: ring edges, path edges, sink edges (R_0 then R_{m-1}).
    edges_.reserve(static_cast<std::size_t>(n) * m + static_cast<std::size_t>(n) * (m - 1) +
                   (with_sink ? 2u * n : 0u));
    for (std::uint32_t j = 0; j < m; ++j)
        for (std::uint32_t i = 0; i < n; ++i)
            edges_.emplace_back(cell(i, j), cell((i + 1) % n, j));
    for (std::uint32_t j = 0; j + 1 < m; ++j)
        for (std::uint32_t i = 0; i < n; ++i)
            edges_.emplace_back(cell(i, j), cell(i, j + 1));
    if (with_sink) {
        const Vertex s = sink_vertex();
        for (std::uint32_t i = 0; i < n; ++i) edges_.emplace_back(cell(i, 0), s);
        for (std::uint32_t i = 0; i < n; ++i) edges_.emplace_back(cell(i, m - 1), s);
    }

    // Incidence rows in the documented neighbor order.
    adj_.offsets.assign(vertex_count_ + 1, 0);
    adj_.targets.reserve(2 * edges_.size());
    for (Vertex v = 0; v < vertex_count_; ++v) {
        adj_.offsets[v] = static_cast<std::uint32_t>(adj_.targets.size());
        if (is_sink(v)) {
            for (std::uint32_t i = 0; i < n; ++i) adj_.targets.push_back(cell(i, 0));
            for (std::uint32_t i = 0; i < n; ++i) adj_.targets.push_back(cell(i, m - 1));
            continue;
        }
        const std::uint32_t i = v % n, j = v / n;
        adj_.targets.push_back(cell((i + 1) % n, j));
        adj_.targets.push_back(cell((i + n - 1) % n, j));
        if (j + 1 < m) adj_.targets.push_back(cell(i, j + 1));
        if (j > 0) adj_.targets.push_back(cell(i, j - 1));
        if (with_sink) {
            if (j == 0) adj_.targets.push_back(sink_vertex());
            if (j == m - 1) adj_.targets.push_back(sink_vertex());
        }
    }
    adj_.offsets[vertex_count_] = static_cast<std::uint32_t>(adj_.targets.size());
}

std::optional<std::uint32_t> CylinderGraph::ring_index(Vertex v) const {
    if (is_sink(v)) return std::nullopt;
    return v / n_;
}

std::optional<std::uint32_t> CylinderGraph::column_index(Vertex v) const {
    if (is_sink(v)) return std::nullopt;
    return v % n_;
}

std::span<const Vertex> CylinderGraph::neighbors(Vertex v) const {
    if (v >= vertex_count_)
        throw std::out_of_range("cylinder: unknown vertex " + std::to_string(v));
    return adj_.row(v);
}

bool CylinderGraph::is_adjacent(Vertex u, Vertex v) const {
    if (u >= vertex_count_ || v >= vertex_count_) return false;
    const auto row = adj_.row(u);
    return std::find(row.begin(), row.end(), v) != row.end();
}

CylinderGraph build(std::uint32_t n, std::uint32_t m, bool with_sink) {
    return CylinderGraph(n, m, with_sink);
}

QuotientGraph::QuotientGraph(const CylinderGraph& g,
                             std::span<const EdgePair> forest,
                             bool retain_loops) {
    const std::uint32_t V = g.vertex_count();
    detail::UnionFind uf(V);
    for (const auto& [u, v] : forest) {
        if (!g.is_adjacent(u, v))
            throw std::invalid_argument("contract: edge not present in graph");
        if (!uf.merge(u, v))
            throw std::invalid_argument("contract: edge set contains a cycle");
    }

    // Class ids in order of smallest member encoding: the first vertex seen
    // in each component (scanning encodings upward) IS its smallest member.
    class_of_.assign(V, 0);
    rep_.clear();
    std::vector<std::uint32_t> root_class(V, UINT32_MAX);
    std::uint32_t next_class = 0;
    for (Vertex v = 0; v < V; ++v) {
        const std::uint32_t r = uf.find(v);
        if (root_class[r] == UINT32_MAX) {
            root_class[r] = next_class++;
            rep_.push_back(v);
        }
        class_of_[v] = root_class[r];
    }
    class_count_ = next_class;

    // A forest edge is consumed once per occurrence so that, on multigraphs,
    // the remaining parallel copies survive as self-loops.
    std::vector<EdgePair> forest_sorted(forest.begin(), forest.end());
    for (auto& e : forest_sorted)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(forest_sorted.begin(), forest_sorted.end());

    auto consume_forest_edge = [&](EdgePair e) {
        if (e.first > e.second) std::swap(e.first, e.second);
        const auto it =
            std::lower_bound(forest_sorted.begin(), forest_sorted.end(), e);
        if (it != forest_sorted.end() && *it == e) {
            forest_sorted.erase(it);
            return true;
        }
        return false;
    };

    const auto base_edges = g.edges();
    std::vector<std::uint32_t> deg(class_count_, 0);
    struct Kept {
        std::uint32_t cu, cv, edge_id;
        bool loop;
    };
    std::vector<Kept> kept;
    kept.reserve(base_edges.size());
    for (std::uint32_t e = 0; e < base_edges.size(); ++e) {
        const auto [u, v] = base_edges[e];
        const std::uint32_t cu = class_of_[u], cv = class_of_[v];
        if (cu == cv) {
            if (consume_forest_edge(base_edges[e])) continue;  // contracted away
            if (!retain_loops) continue;
            deg[cu] += 2;
            kept.push_back({cu, cv, e, true});
        } else {
            deg[cu] += 1;
            deg[cv] += 1;
            kept.push_back({cu, cv, e, false});
        }
    }

    adj_.offsets.assign(class_count_ + 1, 0);
    for (std::uint32_t c = 0; c < class_count_; ++c)
        adj_.offsets[c + 1] = adj_.offsets[c] + deg[c];
    adj_.targets.assign(adj_.offsets[class_count_], 0);
    entry_edge_.assign(adj_.offsets[class_count_], 0);
    std::vector<std::uint32_t> fill(adj_.offsets.begin(), adj_.offsets.end() - 1);
    auto put = [&](std::uint32_t at, Vertex target, std::uint32_t edge_id) {
        adj_.targets[fill[at]] = target;
        entry_edge_[fill[at]] = edge_id;
        ++fill[at];
    };
    for (const auto& k : kept) {
        if (k.loop) {
            put(k.cu, k.cu, k.edge_id);
            put(k.cu, k.cu, k.edge_id);
        } else {
            put(k.cu, k.cv, k.edge_id);
            put(k.cv, k.cu, k.edge_id);
        }
    }
}

QuotientGraph contract(const CylinderGraph& g, std::span<const EdgePair> forest,
                       bool retain_loops) {
    return QuotientGraph(g, forest, retain_loops);
}

}  // namespace cyltree
