#include "cyltree/sandpile.hpp"

#include <deque>
#include <stdexcept>

namespace cyltree {

namespace {

void require_sink(const CylinderGraph& g) {
    if (!g.has_sink())
        throw std::invalid_argument("sandpile: graph must have a sink");
}

std::uint32_t cells(const CylinderGraph& g) { return g.n() * g.m(); }

}  // namespace

bool is_stable(const CylinderGraph& g, const HeightConfig& c) {
    require_sink(g);
    if (c.heights.size() != cells(g)) return false;
    for (Vertex v = 0; v < cells(g); ++v)
        if (c.heights[v] >= g.degree(v)) return false;
    return true;
}

HeightConfig max_stable(const CylinderGraph& g) {
    require_sink(g);
    HeightConfig c;
    c.heights.resize(cells(g));
    for (Vertex v = 0; v < cells(g); ++v) c.heights[v] = g.degree(v) - 1;
    return c;
}

AvalancheRecord stabilize(const CylinderGraph& g, HeightConfig& c,
                          ToppleOrder order) {
    require_sink(g);
    const std::uint32_t nc = cells(g);
    if (c.heights.size() != nc)
        throw std::invalid_argument("sandpile: height vector size mismatch");

    std::deque<Vertex> active;
    std::vector<char> queued(nc, 0);
    for (Vertex v = 0; v < nc; ++v) {
        if (c.heights[v] >= g.degree(v)) {
            active.push_back(v);
            queued[v] = 1;
        }
    }

    AvalancheRecord rec;
    std::vector<char> toppled(nc, 0);
    while (!active.empty()) {
        Vertex v;
        if (order == ToppleOrder::fifo) {
            v = active.front();
            active.pop_front();
        } else {
            v = active.back();
            active.pop_back();
        }
        queued[v] = 0;
        const std::uint32_t deg = g.degree(v);
        if (c.heights[v] < deg) continue;
        c.heights[v] -= deg;
        ++rec.topplings;
        if (!toppled[v]) {
            toppled[v] = 1;
            ++rec.distinct_sites;
        }
        for (const Vertex u : g.neighbors(v)) {
            if (g.is_sink(u)) continue;  // dissipated
            if (++c.heights[u] >= g.degree(u) && !queued[u]) {
                active.push_back(u);
                queued[u] = 1;
            }
        }
        if (c.heights[v] >= deg && !queued[v]) {  // can happen mid-avalanche
            active.push_back(v);
            queued[v] = 1;
        }
    }
    return rec;
}

AvalancheRecord add_and_stabilize(const CylinderGraph& g, HeightConfig& c,
                                  Vertex site, ToppleOrder order) {
    require_sink(g);
    if (site >= cells(g))
        throw std::invalid_argument("sandpile: grain site must be a cell");
    ++c.heights[site];
    AvalancheRecord rec = stabilize(g, c, order);
    rec.seed_site = site;
    return rec;
}

bool is_recurrent(const CylinderGraph& g, const HeightConfig& c) {
    require_sink(g);
    if (!is_stable(g, c))
        throw std::invalid_argument("is_recurrent: configuration not stable");
    const std::uint32_t nc = cells(g);

    // Edges to unburnt vertices, with multiplicity; the sink starts burnt.
    std::vector<std::uint32_t> unburnt_deg(nc);
    for (Vertex v = 0; v < nc; ++v) {
        std::uint32_t d = g.degree(v);
        for (const Vertex u : g.neighbors(v))
            if (g.is_sink(u)) --d;
        unburnt_deg[v] = d;
    }

    std::vector<char> burnt(nc, 0);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < nc; ++v)
        if (c.heights[v] >= unburnt_deg[v]) {
            burnt[v] = 1;
            queue.push_back(v);
        }
    std::uint32_t burned = static_cast<std::uint32_t>(queue.size());
    while (!queue.empty()) {
        const Vertex v = queue.back();
        queue.pop_back();
        for (const Vertex u : g.neighbors(v)) {
            if (g.is_sink(u) || burnt[u]) continue;
            if (--unburnt_deg[u] <= c.heights[u]) {
                burnt[u] = 1;
                queue.push_back(u);
                ++burned;
            }
        }
    }
    return burned == nc;
}

HeightConfig markov_sample_recurrent(const CylinderGraph& g,
                                     std::uint64_t steps, RngStream& rng) {
    require_sink(g);
    HeightConfig c = max_stable(g);
    const std::uint32_t nc = cells(g);
    for (std::uint64_t k = 0; k < steps; ++k)
        add_and_stabilize(g, c, rng.uniform_below(nc));
    return c;
}

std::uint64_t count_recurrent_exhaustive(const CylinderGraph& g) {
    require_sink(g);
    const std::uint32_t nc = cells(g);
    if (nc > 10)
        throw std::invalid_argument(
            "count_recurrent_exhaustive: instance too large (n*m > 10)");
    HeightConfig c;
    c.heights.assign(nc, 0);
    std::uint64_t recurrent = 0;
    for (;;) {
        if (is_recurrent(g, c)) ++recurrent;
        // Odometer over {0..deg-1}^cells.
        std::uint32_t pos = 0;
        while (pos < nc) {
            if (++c.heights[pos] < g.degree(pos)) break;
            c.heights[pos] = 0;
            ++pos;
        }
        if (pos == nc) break;
    }
    return recurrent;
}

}  // namespace cyltree
