#include "cyltree/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "union_find.hpp"

namespace cyltree {

namespace {

// Fraction-free (Bareiss) elimination with row pivoting: every division is
// exact in integers, so the determinant comes out without rationals.
TreeCount bareiss_determinant(std::vector<std::vector<mpz_class>>& a) {
    const std::size_t N = a.size();
    if (N == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < N; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < N && a[piv][k] == 0) ++piv;
            if (piv == N) return 0;
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < N; ++i) {
            for (std::size_t j = k + 1; j < N; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign * a[N - 1][N - 1];
}

}  // namespace

TreeCount spanning_tree_count(std::uint32_t vertex_count,
                              std::span<const EdgePair> edges) {
    if (vertex_count == 0)
        throw std::invalid_argument("spanning_tree_count: empty graph");
    if (vertex_count == 1) return 1;
    const std::size_t N = vertex_count - 1;
    std::vector<std::vector<mpz_class>> lap(N, std::vector<mpz_class>(N, 0));
    // Principal minor: drop vertex 0's row and column. Loops ignored.
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        if (u >= vertex_count || v >= vertex_count)
            throw std::invalid_argument("spanning_tree_count: bad edge endpoint");
        if (u > 0) lap[u - 1][u - 1] += 1;
        if (v > 0) lap[v - 1][v - 1] += 1;
        if (u > 0 && v > 0) {
            lap[u - 1][v - 1] -= 1;
            lap[v - 1][u - 1] -= 1;
        }
    }
    TreeCount det = bareiss_determinant(lap);
    if (det < 0)
        throw std::logic_error("spanning_tree_count: negative determinant");
    return det;
}

TreeCount spanning_tree_count(const CylinderGraph& g) {
    return spanning_tree_count(g.vertex_count(), g.edges());
}

namespace {

bool connects_everything(std::uint32_t vertex_count,
                         detail::UnionFind uf,  // by value: scratch copy
                         std::span<const EdgePair> edges, std::size_t from) {
    std::uint32_t classes = 0;
    for (std::uint32_t v = 0; v < vertex_count; ++v)
        if (uf.find(v) == v) ++classes;
    for (std::size_t e = from; e < edges.size() && classes > 1; ++e)
        if (uf.merge(edges[e].first, edges[e].second)) --classes;
    return classes == 1;
}

struct Enumerator {
    std::uint32_t vertex_count;
    std::span<const EdgePair> edges;
    std::vector<std::uint32_t> chosen;
    std::vector<std::vector<EdgePair>> out;

    void emit() {
        std::vector<EdgePair> tree;
        tree.reserve(chosen.size());
        for (const std::uint32_t e : chosen) {
            auto [u, v] = edges[e];
            if (u > v) std::swap(u, v);
            tree.emplace_back(u, v);
        }
        std::sort(tree.begin(), tree.end());
        out.push_back(std::move(tree));
    }

    // Include/exclude recursion on edge ids; the exclude branch is pruned
    // when the remaining edges can no longer connect the current classes.
    void rec(std::size_t idx, detail::UnionFind& uf) {
        if (chosen.size() == vertex_count - 1) {
            emit();
            return;
        }
        if (idx == edges.size()) return;
        const auto [u, v] = edges[idx];
        detail::UnionFind with = uf;
        if (with.merge(u, v)) {
            chosen.push_back(static_cast<std::uint32_t>(idx));
            rec(idx + 1, with);
            chosen.pop_back();
        }
        if (connects_everything(vertex_count, uf, edges, idx + 1))
            rec(idx + 1, uf);
    }
};

}  // namespace

std::vector<std::vector<EdgePair>> enumerate_spanning_trees(
    std::uint32_t vertex_count, std::span<const EdgePair> edges,
    std::uint64_t cap) {
    const TreeCount count = spanning_tree_count(vertex_count, edges);
    if (count == 0) return {};
    if (mpz_cmp_ui(count.get_mpz_t(), cap) > 0)
        throw std::runtime_error("enumerate_spanning_trees: count " +
                                 count.get_str() + " exceeds cap");
    Enumerator en{vertex_count, edges, {}, {}};
    detail::UnionFind uf(vertex_count);
    en.rec(0, uf);
    std::sort(en.out.begin(), en.out.end());
    if (en.out.size() != count.get_ui())
        throw std::logic_error("enumerate_spanning_trees: count mismatch");
    return std::move(en.out);
}

std::vector<std::vector<EdgePair>> enumerate_spanning_trees(
    const CylinderGraph& g, std::uint64_t cap) {
    return enumerate_spanning_trees(g.vertex_count(), g.edges(), cap);
}

std::optional<std::size_t> universe_index(
    const std::vector<std::vector<EdgePair>>& universe,
    const std::vector<EdgePair>& tree) {
    const auto it = std::lower_bound(universe.begin(), universe.end(), tree);
    if (it == universe.end() || *it != tree) return std::nullopt;
    return static_cast<std::size_t>(it - universe.begin());
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0)
        throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // Series for P(a,x); Q = 1 - P.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < 1000; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Continued fraction for Q (modified Lentz).
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts) {
    const std::size_t k = counts.size();
    if (k < 2)
        throw std::invalid_argument("chi_square_uniform: need at least 2 cells");
    std::uint64_t total = 0;
    for (const auto c : counts) total += c;
    const double expected = static_cast<double>(total) / static_cast<double>(k);
    if (expected < 5.0)
        throw std::invalid_argument(
            "chi_square_uniform: expected count per cell below 5; draw more "
            "samples");
    double stat = 0.0;
    for (const auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    const std::size_t dof = k - 1;
    return {stat, gamma_q(static_cast<double>(dof) / 2.0, stat / 2.0), dof};
}

ChiSquareResult chi_square_uniformity(
    std::span<const std::vector<EdgePair>> samples,
    const std::vector<std::vector<EdgePair>>& universe) {
    std::vector<std::uint64_t> counts(universe.size(), 0);
    for (const auto& s : samples) {
        const auto idx = universe_index(universe, s);
        if (!idx)
            throw std::invalid_argument(
                "chi_square_uniformity: sample outside universe (sampler bug)");
        ++counts[*idx];
    }
    return chi_square_uniform(counts);
}

ChiSquareResult chi_square_two_sample(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("chi_square_two_sample: size mismatch");
    double ta = 0, tb = 0;
    for (const auto x : a) ta += static_cast<double>(x);
    for (const auto x : b) tb += static_cast<double>(x);
    if (ta == 0 || tb == 0)
        throw std::invalid_argument("chi_square_two_sample: empty sample");
    const double ka = std::sqrt(tb / ta), kb = std::sqrt(ta / tb);
    double stat = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = static_cast<double>(a[i]), bi = static_cast<double>(b[i]);
        if (ai + bi == 0) continue;
        const double d = ai * ka - bi * kb;
        stat += d * d / (ai + bi);
        ++used;
    }
    if (used < 2)
        throw std::invalid_argument("chi_square_two_sample: fewer than 2 cells");
    const std::size_t dof = used - 1;
    return {stat, gamma_q(static_cast<double>(dof) / 2.0, stat / 2.0), dof};
}

}  // namespace cyltree
