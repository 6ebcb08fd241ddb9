#ifndef CYLTREE_STATISTICS_HPP
#define CYLTREE_STATISTICS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cyltree {

/// Integer-valued length histogram. Merging is plain integer addition, so
/// it is exact, commutative and associative; replica workers aggregate in
/// any order without changing the result.
struct Histogram {
    std::map<std::int64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    std::uint64_t replicas = 0;

    void add(std::int64_t value, std::uint64_t count = 1) {
        counts[value] += count;
        total += count;
    }
    void merge(const Histogram& other);

    std::int64_t max_value() const;  // throws on empty

    /// CSV with a "length,count" header line.
    void write_csv(std::ostream& os) const;
    static Histogram read_csv(std::istream& is);
};

/// Least-squares fit of log(count) against length: count ~ A exp(-lambda l).
struct ExpFit {
    double A = 0;
    double lambda = 0;
    double r_squared = 0;
    std::int64_t fit_min = 0, fit_max = 0;
    std::size_t bins_used = 0;
};

/// Fits over bins with count >= min_count inside fit_range (default
/// [1, largest qualifying length]). Throws std::runtime_error when fewer
/// than 3 bins qualify or the histogram does not decay.
ExpFit fit_exponential(
    const Histogram& h, std::uint64_t min_count = 10,
    std::optional<std::pair<std::int64_t, std::int64_t>> fit_range = std::nullopt);

/// Constants of the walk-block estimate: within floor(n/2) steps a walk
/// within distance floor(n/2) of the trunk hits it with probability at
/// least 4^(-floor(n/2)).
struct BoundConstants {
    std::uint32_t n = 0;
    double theta = 0;  // (1 - 4^(-floor(n/2)))^(1/floor(n/2))
    double C0 = 0;     // max(1, theta^(-floor(n/2)))
    double delta = 0;  // theta^(1/(8n+1))
};

BoundConstants bound_constants(std::uint32_t n);  // requires n >= 3

/// Tail of the per-replica statistic: p[l] estimates P(X >= l), or
/// P(X > l) when built with strict = true.
struct TailCurve {
    std::vector<double> p;  // indexed by l = 0 .. max+1
    std::uint64_t replicas = 0;
    bool strict = false;
};

/// Builds the tail from a histogram of one value per replica
/// (total must equal replicas; throws otherwise).
TailCurve empirical_tail(const Histogram& per_replica_values,
                         bool strict = false);

enum class BoundKind {
    branch,  // P(max branch >= l) <= C0 * m * (n-1) * theta^l
    slash,   // P(|slash| > l)     <= C0/(1-theta) * delta^l
};

struct BoundReport {
    BoundKind kind = BoundKind::branch;
    double prefactor = 0;
    double rate = 0;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::int64_t first_violation = -1;
    bool ok = true;
};

/// Flags every l whose empirical tail exceeds the theoretical curve by
/// more than 3 binomial standard errors.
BoundReport bound_check(const TailCurve& tail, const BoundConstants& consts,
                        std::uint32_t m, BoundKind kind);

}  // namespace cyltree

#endif  // CYLTREE_STATISTICS_HPP
