#include "cyltree/ust_sampler.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "union_find.hpp"

namespace cyltree {

std::vector<EdgePair> SpanningTree::edges() const {
    std::vector<EdgePair> out;
    out.reserve(parent.size() - 1);
    for (Vertex v = 0; v < parent.size(); ++v)
        if (v != root) out.emplace_back(v, parent[v]);
    return out;
}

std::vector<EdgePair> SpanningTree::edge_set() const {
    std::vector<EdgePair> out = edges();
    for (auto& e : out)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(out.begin(), out.end());
    return out;
}

LoopErasedPath loop_erase(const WalkPath& p) {
    if (p.vertices.empty())
        throw std::invalid_argument("loop_erase: empty walk");
    const Vertex maxv =
        *std::max_element(p.vertices.begin(), p.vertices.end());
    std::vector<std::int32_t> pos(maxv + 1, -1);
    std::vector<Vertex> stack;
    for (const Vertex v : p.vertices) {
        const std::int32_t q = pos[v];
        if (q >= 0) {
            for (std::size_t i = q + 1; i < stack.size(); ++i) pos[stack[i]] = -1;
            stack.resize(q + 1);
        } else {
            pos[v] = static_cast<std::int32_t>(stack.size());
            stack.push_back(v);
        }
    }
    return LoopErasedPath{std::move(stack)};
}

SpanningTree wilson(const CsrAdjacency& g, Vertex root,
                    std::span<const Vertex> order, RngStream& rng,
                    const WilsonOptions& opts) {
    const std::uint32_t V = g.vertex_count();
    if (root >= V) throw std::out_of_range("wilson: root out of range");
    if (order.size() != V - 1)
        throw std::invalid_argument("wilson: order must list all non-root vertices");
    {
        std::vector<char> seen(V, 0);
        seen[root] = 1;
        for (const Vertex v : order) {
            if (v >= V || seen[v])
                throw std::invalid_argument(
                    "wilson: order must be a permutation of the non-root vertices");
            seen[v] = 1;
        }
    }

    SpanningTree t;
    t.root = root;
    t.parent.assign(V, 0);
    t.parent[root] = root;
    t.parent_entry.assign(V, UINT32_MAX);
    if (opts.record_trace) t.trace.emplace();

    std::vector<char> in_tree(V, 0);
    in_tree[root] = 1;
    std::vector<std::int32_t> pos(V, -1);
    std::vector<Vertex> stack;
    std::vector<std::uint32_t> entry_stack;

    for (const Vertex start : order) {
        if (in_tree[start]) continue;
        stack.clear();
        entry_stack.clear();
        stack.push_back(start);
        entry_stack.push_back(UINT32_MAX);
        pos[start] = 0;
        Vertex cur = start;
        std::uint64_t steps = 0;
        for (;;) {
            if (++steps > opts.step_cap)
                throw std::runtime_error(
                    "wilson: per-segment step cap exceeded (sampler bug?)");
            const std::uint32_t entry =
                g.offsets[cur] + rng.uniform_below(g.degree(cur));
            const Vertex nxt = g.targets[entry];
            if (in_tree[nxt]) {
                stack.push_back(nxt);
                entry_stack.push_back(entry);
                break;
            }
            if (nxt == cur) continue;  // self-loop step on a quotient graph
            const std::int32_t p = pos[nxt];
            if (p >= 0) {
                // Revisit: erase the loop back to the first occurrence.
                for (std::size_t i = p + 1; i < stack.size(); ++i)
                    pos[stack[i]] = -1;
                stack.resize(p + 1);
                entry_stack.resize(p + 1);
            } else {
                pos[nxt] = static_cast<std::int32_t>(stack.size());
                stack.push_back(nxt);
                entry_stack.push_back(entry);
            }
            cur = nxt;
        }
        for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
            const Vertex v = stack[i];
            t.parent[v] = stack[i + 1];
            t.parent_entry[v] = entry_stack[i + 1];
            in_tree[v] = 1;
            pos[v] = -1;
        }
        if (t.trace) t.trace->push_back(stack);
    }
    return t;
}

SpanningTree wilson(const CylinderGraph& g, Vertex root,
                    std::span<const Vertex> order, RngStream& rng,
                    const WilsonOptions& opts) {
    return wilson(g.adjacency(), root, order, rng, opts);
}

SpanningTree wilson_extend(const CylinderGraph& g,
                           std::span<const EdgePair> partial, Vertex root,
                           std::span<const Vertex> order, RngStream& rng,
                           const WilsonOptions& opts) {
    const std::uint32_t V = g.vertex_count();
    if (root >= V) throw std::out_of_range("wilson_extend: root out of range");

    detail::UnionFind uf(V);
    for (const auto& [u, v] : partial) {
        if (!g.is_adjacent(u, v))
            throw std::invalid_argument("wilson_extend: partial edge not in graph");
        if (!uf.merge(u, v))
            throw std::invalid_argument("wilson_extend: partial edge set is cyclic");
    }

    // Classes in order of smallest member, as in contract().
    std::vector<std::uint32_t> class_of(V);
    std::uint32_t class_count = 0;
    {
        std::vector<std::uint32_t> root_class(V, UINT32_MAX);
        for (Vertex v = 0; v < V; ++v) {
            const std::uint32_t r = uf.find(v);
            if (root_class[r] == UINT32_MAX) root_class[r] = class_count++;
            class_of[v] = root_class[r];
        }
    }
    std::vector<std::vector<Vertex>> members(class_count);
    for (Vertex v = 0; v < V; ++v) members[class_of[v]].push_back(v);

    // Per-class prefix degree sums; a step from a class is uniform over all
    // edges incident to its members, exactly the contracted-graph walk.
    const CsrAdjacency& adj = g.adjacency();
    std::vector<std::vector<std::uint32_t>> cumdeg(class_count);
    for (std::uint32_t c = 0; c < class_count; ++c) {
        std::uint32_t acc = 0;
        cumdeg[c].reserve(members[c].size());
        for (const Vertex v : members[c]) {
            acc += adj.degree(v);
            cumdeg[c].push_back(acc);
        }
    }

    {
        std::vector<char> in_partial(V, 0);
        for (const auto& [u, v] : partial) in_partial[u] = in_partial[v] = 1;
        std::vector<char> seen(V, 0);
        for (const Vertex v : order) {
            if (v >= V || seen[v])
                throw std::invalid_argument("wilson_extend: bad vertex order");
            seen[v] = 1;
        }
        for (Vertex v = 0; v < V; ++v)
            if (!in_partial[v] && v != root && !seen[v])
                throw std::invalid_argument(
                    "wilson_extend: order must cover all vertices outside the "
                    "partial forest");
    }

    std::vector<char> in_tree(class_count, 0);
    in_tree[class_of[root]] = 1;
    std::vector<std::int32_t> pos(class_count, -1);
    std::vector<std::uint32_t> stack;
    std::vector<EdgePair> entry_edge;  // base edge entering stack[i]
    std::vector<EdgePair> sampled;
    sampled.reserve(class_count - 1);

    auto draw_step = [&](std::uint32_t c) -> EdgePair {
        const auto& mem = members[c];
        Vertex x;
        std::uint32_t slot;
        if (mem.size() == 1) {
            x = mem[0];
            slot = rng.uniform_below(adj.degree(x));
        } else {
            const std::uint32_t r = rng.uniform_below(cumdeg[c].back());
            const auto it =
                std::upper_bound(cumdeg[c].begin(), cumdeg[c].end(), r);
            const std::size_t idx = it - cumdeg[c].begin();
            x = mem[idx];
            slot = r - (idx == 0 ? 0 : cumdeg[c][idx - 1]);
        }
        return {x, adj.row(x)[slot]};
    };

    auto walk_from = [&](std::uint32_t c0) {
        if (in_tree[c0]) return;
        stack.clear();
        entry_edge.clear();
        stack.push_back(c0);
        entry_edge.push_back({0, 0});
        pos[c0] = 0;
        std::uint32_t cur = c0;
        std::uint64_t steps = 0;
        for (;;) {
            if (++steps > opts.step_cap)
                throw std::runtime_error(
                    "wilson_extend: per-segment step cap exceeded (sampler bug?)");
            const EdgePair e = draw_step(cur);
            const std::uint32_t cu = class_of[e.second];
            if (cu == cur) continue;  // edge internal to the class: lazy step
            if (in_tree[cu]) {
                stack.push_back(cu);
                entry_edge.push_back(e);
                break;
            }
            const std::int32_t p = pos[cu];
            if (p >= 0) {
                for (std::size_t i = p + 1; i < stack.size(); ++i)
                    pos[stack[i]] = -1;
                stack.resize(p + 1);
                entry_edge.resize(p + 1);
            } else {
                pos[cu] = static_cast<std::int32_t>(stack.size());
                stack.push_back(cu);
                entry_edge.push_back(e);
            }
            cur = cu;
        }
        for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
            in_tree[stack[i]] = 1;
            pos[stack[i]] = -1;
        }
        for (std::size_t i = 1; i < stack.size(); ++i)
            sampled.push_back(entry_edge[i]);
    };

    for (const Vertex v : order) walk_from(class_of[v]);
    // Forest components the order did not name attach last, in class order.
    for (std::uint32_t c = 0; c < class_count; ++c) walk_from(c);

    // Lift: tree = partial edges + sampled attachment edges; orient by BFS.
    std::vector<std::vector<Vertex>> nbr(V);
    for (const auto& [u, v] : partial) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
    }
    for (const auto& [u, v] : sampled) {
        nbr[u].push_back(v);
        nbr[v].push_back(u);
    }
    SpanningTree t;
    t.root = root;
    t.parent.assign(V, UINT32_MAX);
    t.parent[root] = root;
    std::queue<Vertex> bfs;
    bfs.push(root);
    std::uint32_t reached = 1;
    while (!bfs.empty()) {
        const Vertex v = bfs.front();
        bfs.pop();
        for (const Vertex u : nbr[v]) {
            if (t.parent[u] != UINT32_MAX) continue;
            t.parent[u] = v;
            ++reached;
            bfs.push(u);
        }
    }
    if (reached != V)
        throw std::logic_error("wilson_extend: internal error, tree not spanning");
    return t;
}

std::vector<Vertex> default_order(std::uint32_t vertex_count, Vertex root) {
    std::vector<Vertex> order;
    order.reserve(vertex_count - 1);
    for (Vertex v = 0; v < vertex_count; ++v)
        if (v != root) order.push_back(v);
    return order;
}

std::pair<Vertex, std::vector<Vertex>> trunk_first_order(const CylinderGraph& g) {
    if (g.has_sink()) {
        const Vertex root = g.sink_vertex();
        return {root, default_order(g.vertex_count(), root)};
    }
    const Vertex root = g.cell(0, 0);
    if (g.m() == 1)  // single ring: any first segment meets it
        return {root, default_order(g.vertex_count(), root)};
    const Vertex far_end = g.cell(0, g.m() - 1);
    std::vector<Vertex> order;
    order.reserve(g.vertex_count() - 1);
    order.push_back(far_end);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (v != root && v != far_end) order.push_back(v);
    return {root, std::move(order)};
}

bool is_valid_spanning_tree(const CsrAdjacency& g, const SpanningTree& t) {
    const std::uint32_t V = g.vertex_count();
    if (t.parent.size() != V || t.root >= V) return false;
    if (t.parent[t.root] != t.root) return false;
    for (Vertex v = 0; v < V; ++v) {
        if (v == t.root) continue;
        const Vertex p = t.parent[v];
        if (p >= V) return false;
        const auto row = g.row(v);
        if (std::find(row.begin(), row.end(), p) == row.end()) return false;
    }
    // Every parent chain must reach the root without revisiting a vertex.
    std::vector<std::uint8_t> state(V, 0);  // 0 new, 1 on current chain, 2 ok
    state[t.root] = 2;
    std::vector<Vertex> chain;
    for (Vertex v = 0; v < V; ++v) {
        chain.clear();
        Vertex u = v;
        while (state[u] == 0) {
            state[u] = 1;
            chain.push_back(u);
            u = t.parent[u];
        }
        if (state[u] == 1) return false;  // cycle
        for (const Vertex c : chain) state[c] = 2;
    }
    return true;
}

}  // namespace cyltree
