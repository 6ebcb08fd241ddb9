#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "cyltree/cylinder_graph.hpp"

using namespace cyltree;

TEST_CASE("vertex and edge counts") {
    const CylinderGraph a = build(4, 5, false);
    CHECK(a.vertex_count() == 20);
    CHECK(a.edge_count() == 36);  // 20 ring + 16 path

    const CylinderGraph b = build(4, 6, true);
    CHECK(b.vertex_count() == 25);
    CHECK(b.edge_count() == 52);  // 24 + 20 + 8

    const CylinderGraph c = build(3, 1, false);  // the 3-cycle
    CHECK(c.vertex_count() == 3);
    CHECK(c.edge_count() == 3);

    // m = 1 with sink: both boundary roles coincide, sink edges double up.
    const CylinderGraph d = build(3, 1, true);
    CHECK(d.vertex_count() == 4);
    CHECK(d.edge_count() == 9);
    CHECK(d.degree(d.sink_vertex()) == 6);
    CHECK(d.degree(0) == 4);
}

TEST_CASE("construction rejects degenerate parameters") {
    CHECK_THROWS_AS(build(2, 5, false), std::invalid_argument);
    CHECK_THROWS_AS(build(1, 5, false), std::invalid_argument);
    CHECK_THROWS_AS(build(3, 0, false), std::invalid_argument);
}

TEST_CASE("neighbor order and degrees") {
    const CylinderGraph g = build(4, 5, false);
    CHECK(g.degree(g.cell(0, 2)) == 4);  // interior
    CHECK(g.degree(g.cell(0, 0)) == 3);  // boundary ring, no left path edge

    // Documented order: ring successor, ring predecessor, right, left.
    const auto nb = g.neighbors(g.cell(1, 2));
    REQUIRE(nb.size() == 4);
    CHECK(nb[0] == g.cell(2, 2));
    CHECK(nb[1] == g.cell(0, 2));
    CHECK(nb[2] == g.cell(1, 3));
    CHECK(nb[3] == g.cell(1, 1));

    const CylinderGraph s = build(4, 6, true);
    CHECK(s.degree(s.sink_vertex()) == 8);
    const auto nbs = s.neighbors(s.cell(2, 0));
    REQUIRE(nbs.size() == 4);
    CHECK(nbs[0] == s.cell(3, 0));
    CHECK(nbs[1] == s.cell(1, 0));
    CHECK(nbs[2] == s.cell(2, 1));
    CHECK(nbs[3] == s.sink_vertex());

    CHECK_THROWS_AS(g.neighbors(999), std::out_of_range);
}

TEST_CASE("ring index") {
    const CylinderGraph g = build(3, 9, false);
    CHECK(g.ring_index(g.cell(2, 7)) == 7);
    CHECK(g.ring_index(g.cell(0, 0)) == 0);
    const CylinderGraph s = build(3, 9, true);
    CHECK(!s.ring_index(s.sink_vertex()).has_value());
}

TEST_CASE("handshake: degree sum is twice the edge count") {
    for (const bool sink : {false, true}) {
        for (const auto [n, m] :
             {std::pair{3u, 1u}, {3u, 2u}, {4u, 7u}, {5u, 3u}}) {
            const CylinderGraph g = build(n, m, sink);
            std::uint64_t total = 0;
            for (Vertex v = 0; v < g.vertex_count(); ++v) total += g.degree(v);
            CHECK(total == 2ull * g.edge_count());
        }
    }
}

TEST_CASE("removing an interior ring separates the two sides") {
    const CylinderGraph g = build(4, 7, false);
    const std::uint32_t k = 3;
    // BFS from ring 0 avoiding ring k must reach nothing beyond k.
    std::vector<char> visited(g.vertex_count(), 0);
    std::vector<Vertex> stack;
    for (std::uint32_t i = 0; i < g.n(); ++i) {
        stack.push_back(g.cell(i, 0));
        visited[g.cell(i, 0)] = 1;
    }
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (const Vertex u : g.neighbors(v)) {
            if (visited[u] || *g.ring_index(u) == k) continue;
            visited[u] = 1;
            stack.push_back(u);
        }
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto ring = *g.ring_index(v);
        if (ring > k) CHECK(!visited[v]);
        if (ring < k) CHECK(visited[v]);
    }
}

TEST_CASE("contraction") {
    const CylinderGraph g = build(3, 2, false);

    SUBCASE("empty forest gives an isomorphic quotient") {
        const QuotientGraph q = contract(g, {});
        CHECK(q.class_count() == g.vertex_count());
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            CHECK(q.class_of(v) == v);
            CHECK(q.degree(v) == g.degree(v));
        }
    }

    SUBCASE("one path edge merges one pair") {
        const std::vector<EdgePair> forest{{g.cell(0, 0), g.cell(0, 1)}};
        const QuotientGraph q = contract(g, forest);
        CHECK(q.class_count() == 5);
        CHECK(q.class_of(g.cell(0, 0)) == q.class_of(g.cell(0, 1)));
        // quotient vertices + contracted edges == base vertices
        CHECK(q.class_count() + forest.size() == g.vertex_count());
        // degree of the merged class: 3 + 3 - 2
        CHECK(q.degree(q.class_of(g.cell(0, 0))) == 4);
    }

    SUBCASE("a spanning tree contracts to a single class") {
        // Path through all six vertices.
        const std::vector<EdgePair> forest{
            {g.cell(0, 0), g.cell(1, 0)}, {g.cell(1, 0), g.cell(2, 0)},
            {g.cell(2, 0), g.cell(2, 1)}, {g.cell(2, 1), g.cell(1, 1)},
            {g.cell(1, 1), g.cell(0, 1)}};
        const QuotientGraph q = contract(g, forest);
        CHECK(q.class_count() == 1);
        // Remaining 4 edges all became self-loops: degree 8 with loops,
        // 0 without.
        CHECK(q.degree(0) == 8);
        const QuotientGraph q2 = contract(g, forest, /*retain_loops=*/false);
        CHECK(q2.degree(0) == 0);
    }

    SUBCASE("cyclic edge set is rejected") {
        const std::vector<EdgePair> cycle{{g.cell(0, 0), g.cell(1, 0)},
                                          {g.cell(1, 0), g.cell(2, 0)},
                                          {g.cell(2, 0), g.cell(0, 0)}};
        CHECK_THROWS_AS(contract(g, cycle), std::invalid_argument);
    }

    SUBCASE("non-edges are rejected") {
        const std::vector<EdgePair> bogus{{g.cell(0, 0), g.cell(1, 1)}};
        CHECK_THROWS_AS(contract(g, bogus), std::invalid_argument);
    }

    SUBCASE("quotient handshake with retained loops") {
        const std::vector<EdgePair> forest{{g.cell(0, 0), g.cell(1, 0)},
                                           {g.cell(0, 1), g.cell(1, 1)}};
        const QuotientGraph q = contract(g, forest);
        std::uint64_t total = 0;
        for (std::uint32_t c = 0; c < q.class_count(); ++c) total += q.degree(c);
        CHECK(total == 2ull * (g.edge_count() - forest.size()));
    }
}

TEST_CASE("contracting a parallel sink edge keeps its twin as a loop") {
    const CylinderGraph g = build(3, 1, true);
    const std::vector<EdgePair> forest{{g.cell(0, 0), g.sink_vertex()}};
    const QuotientGraph q = contract(g, forest);
    CHECK(q.class_count() == 3);
    // Merged class 0-sink: degrees 4 + 6, minus 2 for the contracted edge;
    // the parallel twin is now a self-loop and still counts 2.
    CHECK(q.degree(q.class_of(g.cell(0, 0))) == 8);
}
