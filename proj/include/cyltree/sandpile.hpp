#ifndef CYLTREE_SANDPILE_HPP
#define CYLTREE_SANDPILE_HPP

#include <cstdint>
#include <vector>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/rng.hpp"

namespace cyltree {

/// Grain heights over the cells of a sink graph (the sink holds none).
/// On these graphs every cell has degree 4 (two parallel sink edges when
/// m == 1), so stable means height <= 3 everywhere.
struct HeightConfig {
    std::vector<std::uint32_t> heights;  // indexed by cell encoding
};

struct AvalancheRecord {
    std::uint64_t topplings = 0;
    std::uint32_t distinct_sites = 0;
    Vertex seed_site = 0;
};

enum class ToppleOrder { fifo, lifo };

bool is_stable(const CylinderGraph& g, const HeightConfig& c);

/// Every cell at degree - 1.
HeightConfig max_stable(const CylinderGraph& g);

/// Topples until stable; grains sent along sink edges vanish. The final
/// configuration is independent of the processing order; the order
/// parameter exists so tests can verify exactly that.
AvalancheRecord stabilize(const CylinderGraph& g, HeightConfig& c,
                          ToppleOrder order = ToppleOrder::fifo);

/// Adds one grain at `site` and stabilizes in place.
AvalancheRecord add_and_stabilize(const CylinderGraph& g, HeightConfig& c,
                                  Vertex site,
                                  ToppleOrder order = ToppleOrder::fifo);

/// Burning test: starting from the sink, a cell burns once its height
/// reaches its number of edges to unburnt vertices (multiplicity counts).
/// The configuration is recurrent iff everything burns. Requires a stable
/// configuration.
bool is_recurrent(const CylinderGraph& g, const HeightConfig& c);

/// Driven chain: start from the (recurrent) maximal configuration and add
/// `steps` grains at uniformly random cells, stabilizing after each. The
/// output is always recurrent; take steps >= 10*n*m to approximate the
/// stationary (uniform-over-recurrent) measure.
HeightConfig markov_sample_recurrent(const CylinderGraph& g,
                                     std::uint64_t steps, RngStream& rng);

/// Exhaustive scan of all height vectors in {0..deg-1}^cells; counts the
/// recurrent ones. Guarded to tiny instances (n*m <= 10).
std::uint64_t count_recurrent_exhaustive(const CylinderGraph& g);

}  // namespace cyltree

#endif  // CYLTREE_SANDPILE_HPP
