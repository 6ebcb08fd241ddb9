#include <doctest.h>

#include <algorithm>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/exact_oracle.hpp"
#include "cyltree/rng.hpp"
#include "cyltree/sandpile.hpp"

using namespace cyltree;

namespace {

HeightConfig random_stable(const CylinderGraph& g, RngStream& rng) {
    HeightConfig c;
    c.heights.resize(g.n() * g.m());
    for (Vertex v = 0; v < c.heights.size(); ++v)
        c.heights[v] = rng.uniform_below(g.degree(v));
    return c;
}

}  // namespace

TEST_CASE("max stable is all threes and recurrent") {
    const CylinderGraph g = build(3, 2, true);
    const HeightConfig c = max_stable(g);
    REQUIRE(c.heights.size() == 6);
    for (const auto h : c.heights) CHECK(h == 3);
    CHECK(is_stable(g, c));
    CHECK(is_recurrent(g, c));
}

TEST_CASE("grain below threshold causes no topplings") {
    const CylinderGraph g = build(3, 2, true);
    HeightConfig c;
    c.heights.assign(6, 0);
    const auto rec = add_and_stabilize(g, c, 2);
    CHECK(rec.topplings == 0);
    CHECK(rec.distinct_sites == 0);
    CHECK(c.heights[2] == 1);
}

TEST_CASE("isolated toppling sends one grain to each neighbor") {
    const CylinderGraph g = build(3, 2, true);
    HeightConfig c;
    c.heights.assign(6, 2);
    c.heights[g.cell(0, 0)] = 3;
    const auto rec = add_and_stabilize(g, c, g.cell(0, 0));
    CHECK(rec.topplings == 1);
    CHECK(rec.distinct_sites == 1);
    CHECK(c.heights[g.cell(0, 0)] == 0);  // 4 - 4, one grain lost to the sink
    CHECK(c.heights[g.cell(1, 0)] == 3);
    CHECK(c.heights[g.cell(2, 0)] == 3);
    CHECK(c.heights[g.cell(0, 1)] == 3);
}

TEST_CASE("toppling is abelian: fifo and lifo agree") {
    const CylinderGraph g = build(3, 4, true);
    RngStream rng(314, 0);
    const std::uint32_t cells = g.n() * g.m();
    for (int trial = 0; trial < 1000; ++trial) {
        HeightConfig a = random_stable(g, rng);
        const Vertex site = rng.uniform_below(cells);
        HeightConfig b = a;
        const auto ra = add_and_stabilize(g, a, site, ToppleOrder::fifo);
        const auto rb = add_and_stabilize(g, b, site, ToppleOrder::lifo);
        CHECK(a.heights == b.heights);
        CHECK(ra.topplings == rb.topplings);
        CHECK(ra.distinct_sites == rb.distinct_sites);
    }
}

TEST_CASE("burning test basics") {
    const CylinderGraph g = build(3, 2, true);
    HeightConfig zero;
    zero.heights.assign(6, 0);
    CHECK(!is_recurrent(g, zero));

    HeightConfig unstable;
    unstable.heights.assign(6, 9);
    CHECK_THROWS_AS(is_recurrent(g, unstable), std::invalid_argument);
}

TEST_CASE("recurrent count equals the spanning tree count") {
    // Dhar: recurrent configurations biject with spanning trees of the
    // sink graph.
    const CylinderGraph a = build(3, 1, true);
    CHECK(count_recurrent_exhaustive(a) == 50);
    CHECK(spanning_tree_count(a) == 50);

    const CylinderGraph b = build(3, 2, true);
    const auto recurrent = count_recurrent_exhaustive(b);
    CHECK(recurrent == spanning_tree_count(b).get_ui());

    const CylinderGraph c = build(4, 2, true);
    CHECK(count_recurrent_exhaustive(c) == spanning_tree_count(c).get_ui());

    CHECK_THROWS_AS(count_recurrent_exhaustive(build(3, 4, true)),
                    std::invalid_argument);
}

TEST_CASE("markov samples are always recurrent") {
    const CylinderGraph g = build(3, 3, true);
    for (const std::uint64_t steps : {9ull, 90ull, 400ull}) {
        RngStream rng(5, steps);
        const HeightConfig c = markov_sample_recurrent(g, steps, rng);
        CHECK(is_stable(g, c));
        CHECK(is_recurrent(g, c));
    }
}

TEST_CASE("driven chain equilibrates to uniform over recurrent states") {
    // Stationarity of the add-and-stabilize chain is the uniform measure on
    // recurrent configurations; sampled with thinning to dodge
    // autocorrelation.
    const CylinderGraph g = build(3, 1, true);
    const std::uint32_t cells = 3;

    // Index recurrent configurations.
    std::vector<std::vector<std::uint32_t>> recurrent_states;
    {
        HeightConfig c;
        c.heights.assign(cells, 0);
        for (;;) {
            if (is_recurrent(g, c)) recurrent_states.push_back(c.heights);
            std::uint32_t pos = 0;
            while (pos < cells) {
                if (++c.heights[pos] < g.degree(pos)) break;
                c.heights[pos] = 0;
                ++pos;
            }
            if (pos == cells) break;
        }
        std::sort(recurrent_states.begin(), recurrent_states.end());
    }
    REQUIRE(recurrent_states.size() == 50);

    RngStream rng(271828, 0);
    HeightConfig c = max_stable(g);
    const int burnin = 1000, thin = 25, samples = 40000;
    for (int i = 0; i < burnin; ++i)
        add_and_stabilize(g, c, rng.uniform_below(cells));
    std::vector<std::uint64_t> counts(recurrent_states.size(), 0);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < thin; ++i)
            add_and_stabilize(g, c, rng.uniform_below(cells));
        const auto it = std::lower_bound(recurrent_states.begin(),
                                         recurrent_states.end(), c.heights);
        REQUIRE(it != recurrent_states.end());
        REQUIRE(*it == c.heights);
        ++counts[it - recurrent_states.begin()];
    }
    CHECK(chi_square_uniform(counts).p_value > 1e-3);
}
