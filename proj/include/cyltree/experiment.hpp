#ifndef CYLTREE_EXPERIMENT_HPP
#define CYLTREE_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cyltree/statistics.hpp"

namespace cyltree {

enum class Observable { branches, depths, slash };
enum class TrunkChoice { canonical, proof };

/// Everything that determines an experiment's output byte-for-byte: the
/// seed fans out to one fixed stream per replica, aggregation is integer
/// and replica-ordered, so the thread count never shows in the files.
struct ExperimentSpec {
    std::uint32_t n = 3;
    std::uint32_t m = 100;
    bool sink = false;
    std::uint32_t replicas = 100;
    std::uint64_t seed = 1;
    Observable observable = Observable::branches;
    TrunkChoice trunk = TrunkChoice::canonical;
    std::string out_dir = ".";
    std::uint32_t threads = 0;  // 0: hardware concurrency
    std::uint64_t min_count = 10;
    bool write_records = true;
    bool svg = false;
};

struct FitOutcome {
    bool ok = false;
    ExpFit fit;
    std::string error;
};

struct ExperimentResult {
    // branches/depths observables: pooled per-branch and per-vertex-depth
    // histograms plus the per-tree maximum histogram. slash: the
    // per-tree slash-size histogram lands in `maxima` (one value per tree).
    Histogram branch_hist;
    Histogram depth_hist;
    Histogram maxima;
    FitOutcome branch_fit;
    FitOutcome depth_fit;
    FitOutcome slash_fit;
    BoundReport bound;
    std::vector<std::string> files_written;
    bool bounds_ok = true;
};

/// Samples `replicas` trees (one RNG stream each), extracts the observable,
/// and writes per-replica records (JSON lines), histograms (CSV), a fit
/// report and a bound-check report (JSON) into out_dir.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace cyltree

#endif  // CYLTREE_EXPERIMENT_HPP
