#ifndef CYLTREE_TREE_STRUCTURE_HPP
#define CYLTREE_TREE_STRUCTURE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/ust_sampler.hpp"

namespace cyltree {

enum class TrunkMode { canonical, proof_trace };

/// Simple path in the tree that meets every ring.
struct Trunk {
    std::vector<Vertex> vertices;
    TrunkMode mode = TrunkMode::canonical;
    std::size_t length() const { return vertices.size() - 1; }
};

/// Maximal simple path leaving the trunk: shares exactly its first vertex
/// (the attachment) with it and ends at a leaf of the hanging subtree.
struct Branch {
    Vertex attach;
    std::vector<Vertex> vertices;  // vertices[0] == attach
    std::size_t length() const { return vertices.size() - 1; }
};

struct LrSegments {
    std::vector<Vertex> left;   // tree path to the sink enters through R_0
    std::vector<Vertex> right;  // ... through R_{m-1}
};

struct SlashResult {
    std::vector<Vertex> left_set;
    std::vector<Vertex> right_set;
    std::vector<EdgePair> slash_edges;
    std::size_t size = 0;
};

/// Unique tree path between two vertices.
std::vector<Vertex> tree_path(const SpanningTree& t, Vertex from, Vertex to);

/// The tree path (0,0) -> (0,m-1). It crosses every ring, hence is a trunk.
/// Sink graphs use sink_trunk instead; passing one throws.
Trunk canonical_trunk(const CylinderGraph& g, const SpanningTree& t);

/// First loop-erased segment of the sampling trace, for trees sampled with
/// trunk_first_order and record_trace. Throws if the trace is missing or
/// the segment does not meet every ring.
Trunk proof_trunk(const CylinderGraph& g, const SpanningTree& t);

/// Trunk through the sink: path u -> s -> v where u is the deepest-ring
/// vertex of the left segment and v the shallowest-ring vertex of the
/// right one (ties to the smallest encoding). Returns the trunk and the
/// class index i = max ring of the left portion (-1 when there is none).
std::pair<Trunk, std::int32_t> sink_trunk(const CylinderGraph& g,
                                          const SpanningTree& t);

/// All branches of the trunk, one per leaf of each hanging subtree.
std::vector<Branch> branches(const SpanningTree& t, const Trunk& trunk);

/// Tree distance from each vertex to the nearest trunk vertex (0 on it).
std::vector<std::uint32_t> vertex_depths(const SpanningTree& t,
                                         const Trunk& trunk);

/// Branch lengths and per-vertex depths in one traversal, without
/// materializing the branch paths; what the experiment pipelines use.
struct BranchSummary {
    std::vector<std::uint32_t> lengths;  // one entry per branch (leaf)
    std::vector<std::uint32_t> depths;   // per vertex
    std::uint32_t max_length = 0;        // == max depth
};
BranchSummary branch_summary(const SpanningTree& t, const Trunk& trunk);

/// Classify every non-sink vertex by the boundary ring through which its
/// tree path reaches the sink. Requires a sink graph with m >= 2 (with
/// m == 1 the two boundary rings coincide and the sides are undefined).
LrSegments lr_segments(const CylinderGraph& g, const SpanningTree& t);

/// Edges of the graph joining the two segments. No tree edge ever
/// qualifies; edges incident to the sink are skipped.
SlashResult lr_slash(const CylinderGraph& g, const LrSegments& segments);

}  // namespace cyltree

#endif  // CYLTREE_TREE_STRUCTURE_HPP
