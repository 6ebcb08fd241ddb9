#include "cyltree/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/tree_structure.hpp"
#include "cyltree/ust_sampler.hpp"

namespace cyltree {

namespace {

using nlohmann::json;

struct ReplicaOut {
    std::string record;
    Histogram branch_hist;
    Histogram depth_hist;
    std::int64_t tree_stat = 0;  // max branch length, or slash size
};

json fit_to_json(const FitOutcome& f, std::uint64_t min_count) {
    if (!f.ok) return json{{"ok", false}, {"error", f.error}};
    return json{{"ok", true},
                {"A", f.fit.A},
                {"lambda", f.fit.lambda},
                {"r_squared", f.fit.r_squared},
                {"fit_range", {f.fit.fit_min, f.fit.fit_max}},
                {"bins_used", f.fit.bins_used},
                {"min_count", min_count}};
}

FitOutcome try_fit(const Histogram& h, std::uint64_t min_count) {
    FitOutcome out;
    try {
        out.fit = fit_exponential(h, min_count);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& content,
                std::vector<std::string>& files) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
    os << content;
    if (!os) throw std::runtime_error("write failed for " + p.string());
    files.push_back(p.string());
}

void write_histogram(const std::filesystem::path& p, const Histogram& h,
                     std::vector<std::string>& files) {
    std::ostringstream ss;
    h.write_csv(ss);
    write_file(p, ss.str(), files);
}

void write_svg_histogram(const std::filesystem::path& p, const Histogram& h,
                         const std::string& title,
                         std::vector<std::string>& files) {
    const int width = 640, height = 400, margin = 40;
    std::ostringstream ss;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    ss << "<text x=\"" << width / 2 << "\" y=\"16\" text-anchor=\"middle\">"
       << title << "</text>\n";
    if (!h.counts.empty()) {
        const std::int64_t lmax = h.max_value();
        std::uint64_t cmax = 0;
        for (const auto& [l, c] : h.counts) cmax = std::max(cmax, c);
        const double bar_w =
            static_cast<double>(width - 2 * margin) / static_cast<double>(lmax + 1);
        for (const auto& [l, c] : h.counts) {
            const double bh = (height - 2 * margin) *
                              (static_cast<double>(c) / static_cast<double>(cmax));
            const double x = margin + bar_w * static_cast<double>(l);
            ss << "<rect x=\"" << x << "\" y=\"" << height - margin - bh
               << "\" width=\"" << bar_w * 0.9 << "\" height=\"" << bh
               << "\" fill=\"steelblue\"/>\n";
        }
        ss << "<line x1=\"" << margin << "\" y1=\"" << height - margin
           << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin
           << "\" stroke=\"black\"/>\n";
        ss << "<text x=\"" << margin << "\" y=\"" << height - margin + 16
           << "\">0</text>\n";
        ss << "<text x=\"" << width - margin << "\" y=\"" << height - margin + 16
           << "\" text-anchor=\"end\">" << lmax << "</text>\n";
    }
    ss << "</svg>\n";
    write_file(p, ss.str(), files);
}

ReplicaOut run_replica(const CylinderGraph& g, const ExperimentSpec& spec,
                       std::uint32_t replica) {
    RngStream rng(spec.seed, replica);
    ReplicaOut out;

    Vertex root;
    std::vector<Vertex> order;
    WilsonOptions opts;
    if (spec.sink) {
        root = g.sink_vertex();
        order = default_order(g.vertex_count(), root);
    } else if (spec.trunk == TrunkChoice::proof) {
        std::tie(root, order) = trunk_first_order(g);
        opts.record_trace = true;
    } else {
        root = g.cell(0, 0);
        order = default_order(g.vertex_count(), root);
    }
    const SpanningTree tree = wilson(g, root, order, rng, opts);

    json rec;
    rec["replica"] = replica;

    if (spec.observable == Observable::slash) {
        const LrSegments segs = lr_segments(g, tree);
        const SlashResult slash = lr_slash(g, segs);
        out.tree_stat = static_cast<std::int64_t>(slash.size);
        rec["slash"] = slash.size;
        rec["left"] = segs.left.size();
        rec["right"] = segs.right.size();
    } else {
        Trunk trunk;
        if (spec.sink) {
            const auto [tk, cls] = sink_trunk(g, tree);
            trunk = tk;
            rec["class_index"] = cls;
        } else if (spec.trunk == TrunkChoice::proof) {
            trunk = proof_trunk(g, tree);
        } else {
            trunk = canonical_trunk(g, tree);
        }
        const BranchSummary s = branch_summary(tree, trunk);
        for (const std::uint32_t len : s.lengths) out.branch_hist.add(len);
        for (const std::uint32_t d : s.depths) out.depth_hist.add(d);
        out.tree_stat = s.max_length;
        rec["branches"] = s.lengths.size();
        rec["max_branch"] = s.max_length;
        rec["trunk_length"] = trunk.length();
    }
    out.branch_hist.replicas = 1;
    out.depth_hist.replicas = 1;
    out.record = rec.dump();
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.replicas == 0)
        throw std::invalid_argument("experiment: need at least one replica");
    if (spec.observable == Observable::slash) {
        if (!spec.sink)
            throw std::invalid_argument("experiment: slash requires a sink graph");
        if (spec.m < 2)
            throw std::invalid_argument("experiment: slash requires m >= 2");
    }
    const CylinderGraph g = build(spec.n, spec.m, spec.sink);

    std::uint32_t nthreads = spec.threads;
    if (nthreads == 0) {
        nthreads = std::thread::hardware_concurrency();
        if (nthreads == 0) nthreads = 1;
    }
    nthreads = std::min(nthreads, spec.replicas);

    std::vector<ReplicaOut> replicas(spec.replicas);
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::uint32_t r = next.fetch_add(1);
            if (r >= spec.replicas) return;
            try {
                replicas[r] = run_replica(g, spec, r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::uint32_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ExperimentResult result;
    std::string records;
    for (const auto& rep : replicas) {
        result.branch_hist.merge(rep.branch_hist);
        result.depth_hist.merge(rep.depth_hist);
        result.maxima.add(rep.tree_stat);
        records += rep.record;
        records += '\n';
    }
    result.maxima.replicas = spec.replicas;

    const BoundConstants consts = bound_constants(spec.n);
    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path dir(spec.out_dir);

    json fits;
    json bound;
    if (spec.observable == Observable::slash) {
        result.slash_fit = try_fit(result.maxima, spec.min_count);
        fits["slash"] = fit_to_json(result.slash_fit, spec.min_count);
        result.bound =
            bound_check(empirical_tail(result.maxima, /*strict=*/true), consts,
                        spec.m, BoundKind::slash);
        write_histogram(dir / "slash_hist.csv", result.maxima,
                        result.files_written);
        if (spec.svg)
            write_svg_histogram(dir / "hist.svg", result.maxima,
                                "slash size distribution", result.files_written);
    } else {
        result.branch_fit = try_fit(result.branch_hist, spec.min_count);
        result.depth_fit = try_fit(result.depth_hist, spec.min_count);
        fits["branches"] = fit_to_json(result.branch_fit, spec.min_count);
        fits["depths"] = fit_to_json(result.depth_fit, spec.min_count);
        result.bound =
            bound_check(empirical_tail(result.maxima, /*strict=*/false), consts,
                        spec.m, BoundKind::branch);
        write_histogram(dir / "branch_hist.csv", result.branch_hist,
                        result.files_written);
        write_histogram(dir / "depth_hist.csv", result.depth_hist,
                        result.files_written);
        write_histogram(dir / "branch_max_hist.csv", result.maxima,
                        result.files_written);
        if (spec.svg)
            write_svg_histogram(dir / "hist.svg", result.branch_hist,
                                "branch length distribution",
                                result.files_written);
    }
    result.bounds_ok = result.bound.ok;

    bound["kind"] = result.bound.kind == BoundKind::branch ? "branch" : "slash";
    bound["n"] = spec.n;
    bound["m"] = spec.m;
    bound["replicas"] = spec.replicas;
    bound["theta"] = consts.theta;
    bound["C0"] = consts.C0;
    bound["delta"] = consts.delta;
    bound["prefactor"] = result.bound.prefactor;
    bound["rate"] = result.bound.rate;
    bound["checked"] = result.bound.checked;
    bound["violations"] = result.bound.violations;
    bound["first_violation"] = result.bound.first_violation;
    bound["ok"] = result.bound.ok;

    if (spec.write_records)
        write_file(dir / "records.jsonl", records, result.files_written);
    write_file(dir / "fit.json", fits.dump(2) + "\n", result.files_written);
    write_file(dir / "bound_check.json", bound.dump(2) + "\n",
               result.files_written);
    return result;
}

}  // namespace cyltree
