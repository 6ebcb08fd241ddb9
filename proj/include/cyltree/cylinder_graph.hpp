#ifndef CYLTREE_CYLINDER_GRAPH_HPP
#define CYLTREE_CYLINDER_GRAPH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cyltree {

/// Dense vertex encoding: cell (i,j) -> j*n + i, sink -> n*m.
using Vertex = std::uint32_t;

using EdgePair = std::pair<Vertex, Vertex>;

/// Flat incidence lists: one entry per incident edge, so parallel edges
/// repeat their target and a self-loop stores its own vertex twice
/// (each loop contributes 2 to the degree). Walks draw a uniform entry,
/// which makes multiplicities exact for free.
struct CsrAdjacency {
    std::vector<std::uint32_t> offsets;  // size vertex_count()+1
    std::vector<Vertex> targets;

    std::uint32_t vertex_count() const {
        return static_cast<std::uint32_t>(offsets.size() - 1);
    }
    std::uint32_t degree(Vertex v) const { return offsets[v + 1] - offsets[v]; }
    std::span<const Vertex> row(Vertex v) const {
        return {targets.data() + offsets[v], degree(v)};
    }
};

/// The circular-times-linear lattice: n columns around the circumference,
/// m rings along the axis, optionally wired to a single sink vertex
/// adjacent to every vertex of the two boundary rings. When m == 1 the
/// boundary rings coincide and each boundary cell carries two parallel
/// sink edges; the sink degree is 2n in every case.
///
/// Immutable after construction and safe to share across threads.
class CylinderGraph {
public:
    CylinderGraph(std::uint32_t n, std::uint32_t m, bool with_sink);

    std::uint32_t n() const { return n_; }
    std::uint32_t m() const { return m_; }
    bool has_sink() const { return has_sink_; }

    std::uint32_t vertex_count() const { return vertex_count_; }
    std::uint32_t edge_count() const {
        return static_cast<std::uint32_t>(edges_.size());
    }

    Vertex cell(std::uint32_t i, std::uint32_t j) const { return j * n_ + i; }
    Vertex sink_vertex() const { return n_ * m_; }  // valid only with sink
    bool is_sink(Vertex v) const { return has_sink_ && v == n_ * m_; }

    /// Ring index j of a cell; nullopt for the sink.
    std::optional<std::uint32_t> ring_index(Vertex v) const;
    /// Column index i of a cell; nullopt for the sink.
    std::optional<std::uint32_t> column_index(Vertex v) const;

    std::uint32_t degree(Vertex v) const { return adj_.degree(v); }

    /// Incident-edge targets in the fixed order: ring successor, ring
    /// predecessor, path right (j+1), path left (j-1), sink edge(s).
    /// The sink's own row lists R_0 then R_{m-1}, column order.
    /// Throws std::out_of_range for an unknown vertex.
    std::span<const Vertex> neighbors(Vertex v) const;

    bool is_adjacent(Vertex u, Vertex v) const;

    const CsrAdjacency& adjacency() const { return adj_; }

    /// All edges in a fixed order (ring, path, sink); index is the edge id.
    /// For m == 1 sink graphs the two parallel (v, sink) edges appear as
    /// two list entries with equal endpoints.
    std::span<const EdgePair> edges() const { return edges_; }
    EdgePair edge_endpoints(std::uint32_t e) const { return edges_[e]; }

private:
    std::uint32_t n_, m_;
    bool has_sink_;
    std::uint32_t vertex_count_;
    std::vector<EdgePair> edges_;
    CsrAdjacency adj_;
};

/// Throws std::invalid_argument unless n >= 3 and m >= 1.
CylinderGraph build(std::uint32_t n, std::uint32_t m, bool with_sink);

/// Contraction of the graph by a forest of its edges: each tree of the
/// forest collapses to one class. Class ids are assigned in order of the
/// smallest member encoding, so they are stable and deterministic.
class QuotientGraph {
public:
    QuotientGraph(const CylinderGraph& g, std::span<const EdgePair> forest,
                  bool retain_loops);

    std::uint32_t class_count() const { return class_count_; }
    std::uint32_t class_of(Vertex base) const { return class_of_[base]; }
    /// Smallest base encoding in the class.
    Vertex representative(std::uint32_t cls) const { return rep_[cls]; }

    std::uint32_t degree(std::uint32_t cls) const { return adj_.degree(cls); }
    const CsrAdjacency& adjacency() const { return adj_; }

    /// Base edge id of an incidence entry (index into targets).
    std::uint32_t base_edge(std::uint32_t entry) const {
        return entry_edge_[entry];
    }

    std::uint32_t base_vertex_count() const {
        return static_cast<std::uint32_t>(class_of_.size());
    }

private:
    std::uint32_t class_count_;
    std::vector<std::uint32_t> class_of_;
    std::vector<Vertex> rep_;
    CsrAdjacency adj_;
    std::vector<std::uint32_t> entry_edge_;
};

/// Throws std::invalid_argument if the edge set is not a forest in g.
/// Self-loops produced by non-forest edges inside a class are retained by
/// default (each adds 2 to the class degree); pass retain_loops = false to
/// drop them.
QuotientGraph contract(const CylinderGraph& g, std::span<const EdgePair> forest,
                       bool retain_loops = true);

}  // namespace cyltree

#endif  // CYLTREE_CYLINDER_GRAPH_HPP
