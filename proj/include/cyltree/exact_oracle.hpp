#ifndef CYLTREE_EXACT_ORACLE_HPP
#define CYLTREE_EXACT_ORACLE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cyltree/cylinder_graph.hpp"

namespace cyltree {

/// Exact spanning-tree count (arbitrary precision).
using TreeCount = mpz_class;

/// Kirchhoff count: determinant of a principal minor of the Laplacian,
/// evaluated with fraction-free integer elimination. Loops are ignored,
/// parallel edges count with multiplicity. Returns 0 for a disconnected
/// graph. Meant for small instances (up to ~10^3 vertices; cubic in |V|
/// on big integers).
TreeCount spanning_tree_count(std::uint32_t vertex_count,
                              std::span<const EdgePair> edges);
TreeCount spanning_tree_count(const CylinderGraph& g);

/// All spanning trees, each as a sorted list of normalized (min,max)
/// vertex pairs; the outer list is sorted lexicographically. The count is
/// computed first and the call refuses to enumerate beyond `cap`.
/// On multigraphs parallel edges yield distinct trees with equal pair
/// lists.
std::vector<std::vector<EdgePair>> enumerate_spanning_trees(
    std::uint32_t vertex_count, std::span<const EdgePair> edges,
    std::uint64_t cap);
std::vector<std::vector<EdgePair>> enumerate_spanning_trees(
    const CylinderGraph& g, std::uint64_t cap);

/// Index of a canonical edge set in a sorted universe; nullopt if absent.
std::optional<std::size_t> universe_index(
    const std::vector<std::vector<EdgePair>>& universe,
    const std::vector<EdgePair>& tree);

/// Regularized upper incomplete gamma Q(a, x); the chi-square upper tail
/// is Q(df/2, x/2).
double gamma_q(double a, double x);

struct ChiSquareResult {
    double statistic;
    double p_value;
    std::size_t dof;
};

/// Pearson goodness-of-fit of observed counts against the uniform
/// distribution over the cells. Requires an expected count >= 5 per cell,
/// otherwise throws (draw more samples).
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts);

/// Convenience wrapper counting samples against an enumerated universe;
/// throws if a sample does not belong to it (a sampler bug).
ChiSquareResult chi_square_uniformity(
    std::span<const std::vector<EdgePair>> samples,
    const std::vector<std::vector<EdgePair>>& universe);

/// Two-sample homogeneity test over matched cells,
/// X^2 = sum (a sqrt(B/A) - b sqrt(A/B))^2 / (a+b) over cells with a+b > 0.
ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b);

}  // namespace cyltree

#endif  // CYLTREE_EXACT_ORACLE_HPP
