#include "cyltree/tree_structure.hpp"

#include <algorithm>
#include <stdexcept>

namespace cyltree {

namespace {

std::vector<std::vector<Vertex>> tree_adjacency(const SpanningTree& t) {
    std::vector<std::vector<Vertex>> adj(t.parent.size());
    for (Vertex v = 0; v < t.parent.size(); ++v) {
        if (v == t.root) continue;
        adj[v].push_back(t.parent[v]);
        adj[t.parent[v]].push_back(v);
    }
    return adj;
}

void require_trunk_in_tree(const SpanningTree& t, const Trunk& trunk) {
    if (trunk.vertices.empty())
        throw std::invalid_argument("trunk must be nonempty");
    for (std::size_t i = 0; i + 1 < trunk.vertices.size(); ++i) {
        const Vertex a = trunk.vertices[i], b = trunk.vertices[i + 1];
        if (t.parent[a] != b && t.parent[b] != a)
            throw std::invalid_argument("trunk is not a path in the tree");
    }
}

}  // namespace

std::vector<Vertex> tree_path(const SpanningTree& t, Vertex from, Vertex to) {
    const std::uint32_t V = t.vertex_count();
    if (from >= V || to >= V)
        throw std::out_of_range("tree_path: vertex out of range");
    std::vector<Vertex> up_from;
    {
        Vertex v = from;
        for (;;) {
            up_from.push_back(v);
            if (v == t.root) break;
            v = t.parent[v];
        }
    }
    std::vector<std::int32_t> mark(V, -1);
    for (std::size_t i = 0; i < up_from.size(); ++i)
        mark[up_from[i]] = static_cast<std::int32_t>(i);

    std::vector<Vertex> up_to;
    Vertex v = to;
    while (mark[v] < 0) {
        up_to.push_back(v);
        v = t.parent[v];
    }
    std::vector<Vertex> path(up_from.begin(), up_from.begin() + mark[v] + 1);
    path.insert(path.end(), up_to.rbegin(), up_to.rend());
    return path;
}

Trunk canonical_trunk(const CylinderGraph& g, const SpanningTree& t) {
    if (g.has_sink())
        throw std::invalid_argument("canonical_trunk: use sink_trunk on sink graphs");
    return {tree_path(t, g.cell(0, 0), g.cell(0, g.m() - 1)),
            TrunkMode::canonical};
}

Trunk proof_trunk(const CylinderGraph& g, const SpanningTree& t) {
    if (g.has_sink())
        throw std::invalid_argument("proof_trunk: use sink_trunk on sink graphs");
    if (!t.trace || t.trace->empty())
        throw std::invalid_argument("proof_trunk: tree carries no sampling trace");
    const auto& beta1 = t.trace->front();
    std::vector<char> ring_seen(g.m(), 0);
    for (const Vertex v : beta1) ring_seen[*g.ring_index(v)] = 1;
    if (std::find(ring_seen.begin(), ring_seen.end(), 0) != ring_seen.end())
        throw std::invalid_argument(
            "proof_trunk: first trace segment misses a ring; sample with "
            "trunk-first order");
    return {beta1, TrunkMode::proof_trace};
}

std::pair<Trunk, std::int32_t> sink_trunk(const CylinderGraph& g,
                                          const SpanningTree& t) {
    if (!g.has_sink())
        throw std::invalid_argument("sink_trunk: graph has no sink");
    const Vertex s = g.sink_vertex();

    if (g.m() == 1) {
        // Single ring: both boundary roles coincide; every vertex counts as
        // left and the trunk is the path from the smallest cell to s.
        return {Trunk{tree_path(t, g.cell(0, 0), s), TrunkMode::canonical}, 0};
    }

    const LrSegments lr = lr_segments(g, t);
    bool have_u = false, have_v = false;
    Vertex u = 0, v = 0;
    std::uint32_t u_ring = 0, v_ring = 0;
    for (const Vertex w : lr.left) {  // ascending encoding: ties keep smallest
        const std::uint32_t r = *g.ring_index(w);
        if (!have_u || r > u_ring) {
            have_u = true;
            u = w;
            u_ring = r;
        }
    }
    for (const Vertex w : lr.right) {
        const std::uint32_t r = *g.ring_index(w);
        if (!have_v || r < v_ring) {
            have_v = true;
            v = w;
            v_ring = r;
        }
    }

    std::vector<Vertex> trunk_vertices;
    if (have_u) {
        trunk_vertices = tree_path(t, u, s);
    } else {
        trunk_vertices.push_back(s);
    }
    if (have_v) {
        const auto down = tree_path(t, s, v);
        trunk_vertices.insert(trunk_vertices.end(), down.begin() + 1, down.end());
    }
    const std::int32_t cls =
        have_u ? static_cast<std::int32_t>(u_ring) : -1;
    return {Trunk{std::move(trunk_vertices), TrunkMode::canonical}, cls};
}

std::vector<Branch> branches(const SpanningTree& t, const Trunk& trunk) {
    require_trunk_in_tree(t, trunk);
    const auto adj = tree_adjacency(t);
    std::vector<char> on_trunk(t.vertex_count(), 0);
    for (const Vertex v : trunk.vertices) on_trunk[v] = 1;

    std::vector<Branch> out;
    std::vector<Vertex> path;
    struct Frame {
        Vertex v, par;
        std::uint32_t depth;
    };
    std::vector<Frame> stack;
    for (const Vertex w : trunk.vertices) {
        for (const Vertex x : adj[w]) {
            if (on_trunk[x]) continue;
            stack.push_back({x, w, 1});
            while (!stack.empty()) {
                const Frame f = stack.back();
                stack.pop_back();
                path.resize(f.depth);
                path[0] = w;
                path.push_back(f.v);
                bool leaf = true;
                for (const Vertex u : adj[f.v]) {
                    if (u == f.par) continue;
                    stack.push_back({u, f.v, f.depth + 1});
                    leaf = false;
                }
                if (leaf) out.push_back({w, path});
            }
        }
    }
    return out;
}

BranchSummary branch_summary(const SpanningTree& t, const Trunk& trunk) {
    require_trunk_in_tree(t, trunk);
    const auto adj = tree_adjacency(t);
    std::vector<char> on_trunk(t.vertex_count(), 0);
    for (const Vertex v : trunk.vertices) on_trunk[v] = 1;

    BranchSummary s;
    s.depths.assign(t.vertex_count(), 0);
    struct Frame {
        Vertex v, par;
        std::uint32_t depth;
    };
    std::vector<Frame> stack;
    for (const Vertex w : trunk.vertices) {
        for (const Vertex x : adj[w]) {
            if (on_trunk[x]) continue;
            stack.push_back({x, w, 1});
            while (!stack.empty()) {
                const Frame f = stack.back();
                stack.pop_back();
                s.depths[f.v] = f.depth;
                bool leaf = true;
                for (const Vertex u : adj[f.v]) {
                    if (u == f.par) continue;
                    stack.push_back({u, f.v, f.depth + 1});
                    leaf = false;
                }
                if (leaf) {
                    s.lengths.push_back(f.depth);
                    s.max_length = std::max(s.max_length, f.depth);
                }
            }
        }
    }
    return s;
}

std::vector<std::uint32_t> vertex_depths(const SpanningTree& t,
                                         const Trunk& trunk) {
    return branch_summary(t, trunk).depths;
}

LrSegments lr_segments(const CylinderGraph& g, const SpanningTree& t) {
    if (!g.has_sink())
        throw std::invalid_argument("lr_segments: graph has no sink");
    if (g.m() < 2)
        throw std::invalid_argument(
            "lr_segments: sides are undefined on a single-ring cylinder");
    const Vertex s = g.sink_vertex();
    const auto adj = tree_adjacency(t);

    std::vector<std::int8_t> side(g.vertex_count(), -1);
    std::vector<Vertex> stack;
    for (const Vertex w : adj[s]) {
        const std::uint32_t ring = *g.ring_index(w);
        std::int8_t label;
        if (ring == 0) {
            label = 0;
        } else if (ring == g.m() - 1) {
            label = 1;
        } else {
            throw std::logic_error("lr_segments: tree edge at sink off boundary");
        }
        // Subtree hanging off this sink edge.
        side[w] = label;
        stack.push_back(w);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (const Vertex u : adj[v]) {
                if (u == s || side[u] >= 0) continue;
                side[u] = label;
                stack.push_back(u);
            }
        }
    }

    LrSegments out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (v == s) continue;
        if (side[v] == 0)
            out.left.push_back(v);
        else if (side[v] == 1)
            out.right.push_back(v);
        else
            throw std::logic_error("lr_segments: vertex not reached from sink");
    }
    return out;
}

SlashResult lr_slash(const CylinderGraph& g, const LrSegments& segments) {
    std::vector<std::int8_t> side(g.vertex_count(), -1);
    for (const Vertex v : segments.left) side[v] = 0;
    for (const Vertex v : segments.right) side[v] = 1;

    SlashResult out;
    out.left_set = segments.left;
    out.right_set = segments.right;
    for (const auto& [u, v] : g.edges()) {
        if (g.is_sink(u) || g.is_sink(v)) continue;
        if (side[u] < 0 || side[v] < 0)
            throw std::invalid_argument("lr_slash: segments do not cover graph");
        if (side[u] != side[v]) out.slash_edges.emplace_back(u, v);
    }
    out.size = out.slash_edges.size();
    return out;
}

}  // namespace cyltree
