#ifndef CYLTREE_UST_SAMPLER_HPP
#define CYLTREE_UST_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/rng.hpp"

namespace cyltree {

/// Safety cap on random-walk steps per segment. Hitting is a.s. finite on
/// a finite connected graph, so tripping the cap indicates a bug.
inline constexpr std::uint64_t kDefaultStepCap = 1'000'000'000ULL;

struct WalkPath {
    std::vector<Vertex> vertices;
    std::size_t length() const { return vertices.size() - 1; }  // in edges
};

struct LoopErasedPath {
    std::vector<Vertex> vertices;
    std::size_t length() const { return vertices.size() - 1; }
};

/// Rooted spanning tree over the vertices of the graph it was sampled on.
/// parent[root] == root. parent_entry[v] is the incidence entry (index into
/// the adjacency targets of v's row) of the edge v -> parent[v], when the
/// sampler recorded it; it is what lifts quotient trees back to base edges.
struct SpanningTree {
    Vertex root = 0;
    std::vector<Vertex> parent;
    std::vector<std::uint32_t> parent_entry;
    /// Loop-erased segments in insertion order, each ending at the vertex
    /// where it attached. Present only when requested at sampling time.
    std::optional<std::vector<std::vector<Vertex>>> trace;

    std::uint32_t vertex_count() const {
        return static_cast<std::uint32_t>(parent.size());
    }

    /// Tree edges as (child, parent) pairs, child ascending.
    std::vector<EdgePair> edges() const;
    /// Tree edges normalized (min, max) and sorted; canonical for set
    /// comparisons against enumerated universes.
    std::vector<EdgePair> edge_set() const;
};

/// Simple random walk from start until the first vertex satisfying the
/// target predicate, drawing each step uniformly over incident edges
/// (multiplicities respected). The start itself may satisfy the target.
/// Throws std::runtime_error if step_cap is exceeded.
template <typename Pred>
WalkPath walk_until_hit(const CsrAdjacency& g, Vertex start, Pred&& target,
                        RngStream& rng, std::uint64_t step_cap = kDefaultStepCap) {
    if (start >= g.vertex_count())
        throw std::out_of_range("walk_until_hit: start vertex out of range");
    WalkPath path;
    path.vertices.push_back(start);
    Vertex v = start;
    std::uint64_t steps = 0;
    while (!target(v)) {
        if (++steps > step_cap)
            throw std::runtime_error(
                "walk_until_hit: step cap exceeded; target set unreachable or "
                "sampler bug");
        const auto row = g.row(v);
        v = row[rng.uniform_below(g.degree(v))];
        path.vertices.push_back(v);
    }
    return path;
}

/// Chronological loop erasure: scanning the walk, a revisit of a vertex
/// still on the current path deletes the whole loop in between. The result
/// is a simple path with the same endpoints.
LoopErasedPath loop_erase(const WalkPath& p);

struct WilsonOptions {
    bool record_trace = false;
    std::uint64_t step_cap = kDefaultStepCap;
};

/// Wilson's algorithm: for each vertex of `order` not yet in the tree, run
/// a random walk to the tree, loop-erase, attach. Loop erasure is done
/// incrementally during the walk, so the full walk is never stored.
/// `order` must be a permutation of V minus the root. The output is an
/// exactly uniform spanning tree.
SpanningTree wilson(const CsrAdjacency& g, Vertex root,
                    std::span<const Vertex> order, RngStream& rng,
                    const WilsonOptions& opts = {});

SpanningTree wilson(const CylinderGraph& g, Vertex root,
                    std::span<const Vertex> order, RngStream& rng,
                    const WilsonOptions& opts = {});

/// Continuation of Wilson's algorithm from a partial forest: the returned
/// tree has the law of a uniform spanning tree conditioned to contain every
/// forest edge. Walks treat each forest component as a single site (a step
/// from a component is uniform over all edges incident to it), which is the
/// contracted-graph walk without building the quotient.
/// `order` must cover all vertices outside the forest; vertices of
/// unattached forest components are processed afterwards in class order.
/// Throws std::invalid_argument for a cyclic partial edge set.
SpanningTree wilson_extend(const CylinderGraph& g,
                           std::span<const EdgePair> partial, Vertex root,
                           std::span<const Vertex> order, RngStream& rng,
                           const WilsonOptions& opts = {});

/// Vertex order for sampling: all non-root vertices in encoding order.
std::vector<Vertex> default_order(std::uint32_t vertex_count, Vertex root);

/// Root and order that make the first loop-erased segment a left-right
/// path: root (0,0), first vertex (0,m-1), rest in encoding order. On sink
/// graphs the walk-to-sink structure already provides the trunk, so the
/// root is the sink and the order is the plain encoding order.
std::pair<Vertex, std::vector<Vertex>> trunk_first_order(const CylinderGraph& g);

/// Structural check used by tests on every sampled tree: |edges| = |V|-1,
/// parent chains reach the root without repetition, every parent link is a
/// graph edge.
bool is_valid_spanning_tree(const CsrAdjacency& g, const SpanningTree& t);

}  // namespace cyltree

#endif  // CYLTREE_UST_SAMPLER_HPP
