// Command-line front end: sampling, structure extraction, fitting,
// uniformity checks and the sandpile experiments, with reproducible seeds
// and machine-readable outputs (JSON lines, CSV).

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cyltree/cylinder_graph.hpp"
#include "cyltree/exact_oracle.hpp"
#include "cyltree/experiment.hpp"
#include "cyltree/rng.hpp"
#include "cyltree/sandpile.hpp"
#include "cyltree/statistics.hpp"
#include "cyltree/tree_structure.hpp"
#include "cyltree/ust_sampler.hpp"

namespace {

using nlohmann::json;
using namespace cyltree;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitBoundFailure = 3;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::uint32_t threads = 0;
    std::string out_dir = ".";
};

void write_text(const std::filesystem::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + p.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + p.string());
}

void write_hist_csv(const std::filesystem::path& p, const Histogram& h) {
    std::ostringstream ss;
    h.write_csv(ss);
    write_text(p, ss.str());
}

json fit_json(const Histogram& h, std::uint64_t min_count) {
    try {
        const ExpFit fit = fit_exponential(h, min_count);
        return json{{"ok", true},
                    {"A", fit.A},
                    {"lambda", fit.lambda},
                    {"r_squared", fit.r_squared},
                    {"fit_range", {fit.fit_min, fit.fit_max}},
                    {"bins_used", fit.bins_used},
                    {"min_count", min_count}};
    } catch (const std::exception& e) {
        return json{{"ok", false}, {"error", e.what()}};
    }
}

json bound_json(const BoundReport& r, const BoundConstants& c, std::uint32_t n,
                std::uint32_t m, std::uint32_t replicas) {
    return json{{"kind", r.kind == BoundKind::branch ? "branch" : "slash"},
                {"n", n},
                {"m", m},
                {"replicas", replicas},
                {"theta", c.theta},
                {"C0", c.C0},
                {"delta", c.delta},
                {"prefactor", r.prefactor},
                {"rate", r.rate},
                {"checked", r.checked},
                {"violations", r.violations},
                {"first_violation", r.first_violation},
                {"ok", r.ok}};
}

// ---------------------------------------------------------------- graph info

int cmd_graph_info(std::uint32_t n, std::uint32_t m, bool sink) {
    const CylinderGraph g = build(n, m, sink);
    std::map<std::string, std::uint32_t> deg_hist;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        ++deg_hist[std::to_string(g.degree(v))];
    const json out{{"n", n},
                   {"m", m},
                   {"sink", sink},
                   {"vertices", g.vertex_count()},
                   {"edges", g.edge_count()},
                   {"degree_histogram", deg_hist}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// -------------------------------------------------------------------- sample

int cmd_sample(const GlobalOpts& g_opts, std::uint32_t n, std::uint32_t m,
               bool sink, std::uint32_t count, bool trace,
               const std::string& order_kind, const std::string& out_path) {
    const CylinderGraph g = build(n, m, sink);
    Vertex root;
    std::vector<Vertex> order;
    if (order_kind == "trunk-first") {
        std::tie(root, order) = trunk_first_order(g);
    } else {
        root = sink ? g.sink_vertex() : g.cell(0, 0);
        order = default_order(g.vertex_count(), root);
    }
    WilsonOptions opts;
    opts.record_trace = trace;

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + out_path);
        os = &file;
    }
    for (std::uint32_t r = 0; r < count; ++r) {
        RngStream rng(g_opts.seed, r);
        const SpanningTree t = wilson(g, root, order, rng, opts);
        json rec{{"n", n},
                 {"m", m},
                 {"sink", sink},
                 {"seed", g_opts.seed},
                 {"order", order_kind},
                 {"replica", r},
                 {"root", root}};
        rec["edges"] = t.edge_set();
        if (t.trace) rec["trace"] = *t.trace;
        *os << rec.dump() << "\n";
    }
    return kExitOk;
}

// --------------------------------------------------- trees.jsonl based modes

struct LoadedTree {
    SpanningTree tree;
    std::uint32_t replica = 0;
};

struct LoadedSet {
    std::uint32_t n = 0, m = 0;
    bool sink = false;
    std::vector<LoadedTree> trees;
};

LoadedSet load_trees(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    LoadedSet set;
    std::optional<CylinderGraph> g;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json rec = json::parse(line);
        const std::uint32_t n = rec.at("n"), m = rec.at("m");
        const bool sink = rec.at("sink");
        if (!g) {
            set.n = n;
            set.m = m;
            set.sink = sink;
            g.emplace(build(n, m, sink));
        } else if (n != set.n || m != set.m || sink != set.sink) {
            throw std::runtime_error("trees file mixes graph parameters");
        }
        LoadedTree lt;
        lt.replica = rec.value("replica", 0u);
        SpanningTree& t = lt.tree;
        t.root = rec.at("root");
        t.parent.assign(g->vertex_count(), UINT32_MAX);
        t.parent[t.root] = t.root;
        std::vector<std::vector<Vertex>> adj(g->vertex_count());
        for (const auto& e : rec.at("edges")) {
            const Vertex u = e.at(0), v = e.at(1);
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        std::vector<Vertex> stack{t.root};
        std::uint32_t reached = 1;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (const Vertex u : adj[v]) {
                if (t.parent[u] != UINT32_MAX) continue;
                t.parent[u] = v;
                ++reached;
                stack.push_back(u);
            }
        }
        if (reached != g->vertex_count())
            throw std::runtime_error("record " + std::to_string(lt.replica) +
                                     ": edges do not span the graph");
        if (rec.contains("trace"))
            t.trace = rec.at("trace").get<std::vector<std::vector<Vertex>>>();
        set.trees.push_back(std::move(lt));
    }
    if (set.trees.empty()) throw std::runtime_error("no trees in " + path);
    return set;
}

int cmd_branches_from_file(const GlobalOpts& g_opts, const std::string& in_path,
                           const std::string& trunk_kind,
                           std::uint64_t min_count, bool assert_bounds) {
    const LoadedSet set = load_trees(in_path);
    const CylinderGraph g = build(set.n, set.m, set.sink);

    Histogram branch_hist, depth_hist, maxima;
    std::string records;
    for (const auto& lt : set.trees) {
        Trunk trunk;
        json rec{{"replica", lt.replica}};
        if (set.sink) {
            const auto [tk, cls] = sink_trunk(g, lt.tree);
            trunk = tk;
            rec["class_index"] = cls;
        } else if (trunk_kind == "proof") {
            trunk = proof_trunk(g, lt.tree);
        } else {
            trunk = canonical_trunk(g, lt.tree);
        }
        const BranchSummary s = branch_summary(lt.tree, trunk);
        Histogram local_b, local_d;
        for (const auto len : s.lengths) local_b.add(len);
        for (const auto d : s.depths) local_d.add(d);
        local_b.replicas = local_d.replicas = 1;
        branch_hist.merge(local_b);
        depth_hist.merge(local_d);
        maxima.add(s.max_length);
        rec["branches"] = s.lengths.size();
        rec["max_branch"] = s.max_length;
        rec["trunk_length"] = trunk.length();
        records += rec.dump();
        records += '\n';
    }
    maxima.replicas = set.trees.size();

    const std::filesystem::path dir(g_opts.out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "records.jsonl", records);
    write_hist_csv(dir / "branch_hist.csv", branch_hist);
    write_hist_csv(dir / "depth_hist.csv", depth_hist);
    write_hist_csv(dir / "branch_max_hist.csv", maxima);

    json fits;
    fits["branches"] = fit_json(branch_hist, min_count);
    fits["depths"] = fit_json(depth_hist, min_count);
    write_text(dir / "fit.json", fits.dump(2) + "\n");

    const BoundConstants consts = bound_constants(set.n);
    const BoundReport report =
        bound_check(empirical_tail(maxima), consts, set.m, BoundKind::branch);
    write_text(dir / "bound_check.json",
               bound_json(report, consts, set.n, set.m,
                          static_cast<std::uint32_t>(set.trees.size()))
                       .dump(2) +
                   "\n");
    std::cout << fits.dump(2) << "\n";
    if (assert_bounds && !report.ok) return kExitBoundFailure;
    return kExitOk;
}

int cmd_slash_from_file(const GlobalOpts& g_opts, const std::string& in_path,
                        std::uint64_t min_count, bool assert_bounds) {
    const LoadedSet set = load_trees(in_path);
    if (!set.sink) throw std::runtime_error("slash needs sink-graph trees");
    const CylinderGraph g = build(set.n, set.m, set.sink);

    Histogram sizes;
    std::string records;
    for (const auto& lt : set.trees) {
        const LrSegments segs = lr_segments(g, lt.tree);
        const SlashResult slash = lr_slash(g, segs);
        sizes.add(static_cast<std::int64_t>(slash.size));
        const json rec{{"replica", lt.replica},
                       {"slash", slash.size},
                       {"left", segs.left.size()},
                       {"right", segs.right.size()}};
        records += rec.dump();
        records += '\n';
    }
    sizes.replicas = set.trees.size();

    const std::filesystem::path dir(g_opts.out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "records.jsonl", records);
    write_hist_csv(dir / "slash_hist.csv", sizes);

    json fits;
    fits["slash"] = fit_json(sizes, min_count);
    write_text(dir / "fit.json", fits.dump(2) + "\n");

    const BoundConstants consts = bound_constants(set.n);
    const BoundReport report = bound_check(
        empirical_tail(sizes, /*strict=*/true), consts, set.m, BoundKind::slash);
    write_text(dir / "bound_check.json",
               bound_json(report, consts, set.n, set.m,
                          static_cast<std::uint32_t>(set.trees.size()))
                       .dump(2) +
                   "\n");
    std::cout << fits.dump(2) << "\n";
    if (assert_bounds && !report.ok) return kExitBoundFailure;
    return kExitOk;
}

// --------------------------------------------------------- direct experiment

int run_direct(const ExperimentSpec& spec, bool assert_bounds) {
    const ExperimentResult res = run_experiment(spec);
    json out;
    auto brief = [](const FitOutcome& f) {
        if (!f.ok) return json{{"ok", false}, {"error", f.error}};
        return json{{"ok", true},
                    {"A", f.fit.A},
                    {"lambda", f.fit.lambda},
                    {"r_squared", f.fit.r_squared}};
    };
    if (spec.observable == Observable::slash) {
        out["slash"] = brief(res.slash_fit);
    } else {
        out["branches"] = brief(res.branch_fit);
        out["depths"] = brief(res.depth_fit);
    }
    out["bounds_ok"] = res.bounds_ok;
    out["out_dir"] = spec.out_dir;
    std::cout << out.dump(2) << "\n";
    if (assert_bounds && !res.bounds_ok) return kExitBoundFailure;
    return kExitOk;
}

// ----------------------------------------------------------------------- fit

int cmd_fit(const std::string& input, std::uint64_t min_count,
            std::optional<std::int64_t> lmin, std::optional<std::int64_t> lmax) {
    std::ifstream is(input);
    if (!is) throw std::runtime_error("cannot open " + input);
    const Histogram h = Histogram::read_csv(is);
    std::optional<std::pair<std::int64_t, std::int64_t>> range;
    if (lmin || lmax) {
        range = {lmin.value_or(0),
                 lmax.value_or(std::numeric_limits<std::int64_t>::max())};
    }
    const ExpFit fit = fit_exponential(h, min_count, range);
    const json out{{"A", fit.A},
                   {"lambda", fit.lambda},
                   {"r_squared", fit.r_squared},
                   {"fit_range", {fit.fit_min, fit.fit_max}},
                   {"bins_used", fit.bins_used},
                   {"min_count", min_count}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- uniformity

int cmd_verify_uniformity(std::uint32_t n, std::uint32_t m, bool sink,
                          std::uint32_t samples, std::uint64_t seed) {
    const CylinderGraph g = build(n, m, sink);
    const auto universe = enumerate_spanning_trees(g, 1000000);
    std::vector<std::uint64_t> counts(universe.size(), 0);
    const Vertex root = sink ? g.sink_vertex() : 0;
    const auto order = default_order(g.vertex_count(), root);
    RngStream rng(seed, 0);
    for (std::uint32_t i = 0; i < samples; ++i) {
        const auto idx =
            universe_index(universe, wilson(g, root, order, rng).edge_set());
        if (!idx) throw std::runtime_error("sampled tree outside the universe");
        ++counts[*idx];
    }
    const ChiSquareResult res = chi_square_uniform(counts);
    const json out{{"count", universe.size()},
                   {"statistic", res.statistic},
                   {"p_value", res.p_value}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ sandpile

int cmd_sandpile_avalanches(const GlobalOpts& g_opts, std::uint32_t n,
                            std::uint32_t m, std::uint64_t grains,
                            const std::string& init, std::uint64_t burnin,
                            std::int64_t fixed_site) {
    const CylinderGraph g = build(n, m, true);
    RngStream rng(g_opts.seed, 0);
    HeightConfig c = max_stable(g);
    if (init == "stationary") {
        const std::uint64_t steps = burnin ? burnin : 10ull * n * m;
        for (std::uint64_t i = 0; i < steps; ++i)
            add_and_stabilize(g, c, rng.uniform_below(n * m));
    }

    std::ostringstream csv;
    csv << "grain,site,topplings,distinct_sites\n";
    Histogram topplings_hist, sites_hist;
    for (std::uint64_t k = 0; k < grains; ++k) {
        const Vertex site = fixed_site >= 0
                                ? static_cast<Vertex>(fixed_site)
                                : rng.uniform_below(n * m);
        const AvalancheRecord rec = add_and_stabilize(g, c, site);
        csv << k << "," << site << "," << rec.topplings << ","
            << rec.distinct_sites << "\n";
        topplings_hist.add(static_cast<std::int64_t>(rec.topplings));
        sites_hist.add(rec.distinct_sites);
    }
    topplings_hist.replicas = sites_hist.replicas = grains;

    const std::filesystem::path dir(g_opts.out_dir);
    std::filesystem::create_directories(dir);
    write_text(dir / "avalanches.csv", csv.str());
    write_hist_csv(dir / "avalanche_topplings_hist.csv", topplings_hist);
    write_hist_csv(dir / "avalanche_sites_hist.csv", sites_hist);
    const json out{{"grains", grains},
                   {"init", init},
                   {"out_dir", g_opts.out_dir},
                   {"final_recurrent", is_recurrent(g, c)}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_sandpile_recurrent_count(std::uint32_t n, std::uint32_t m) {
    const CylinderGraph g = build(n, m, true);
    const std::uint64_t recurrent = count_recurrent_exhaustive(g);
    const TreeCount trees = spanning_tree_count(g);
    const json out{{"recurrent", recurrent},
                   {"spanning_trees", trees.get_str()},
                   {"equal", trees == recurrent}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniform spanning trees on cylinders: sampling, structure "
                 "statistics and sandpile experiments"};
    app.require_subcommand(1);

    GlobalOpts g_opts;
    app.add_option("--seed", g_opts.seed, "base RNG seed")->capture_default_str();
    app.add_option("--threads", g_opts.threads, "worker threads (0 = hardware)");
    app.add_option("--out-dir", g_opts.out_dir, "output directory")
        ->capture_default_str();

    std::uint32_t n = 3, m = 2;
    bool sink = false;

    auto* graph_cmd = app.add_subcommand("graph", "graph queries");
    graph_cmd->fallthrough();
    graph_cmd->require_subcommand(1);
    auto* info = graph_cmd->add_subcommand("info", "print |V|, |E|, degrees");
    info->fallthrough();
    info->add_option("--n", n, "circumference (>= 3)")->required();
    info->add_option("--m", m, "length (>= 1)")->required();
    info->add_flag("--sink", sink, "attach the sink vertex");

    auto* sample = app.add_subcommand("sample", "emit sampled trees as JSONL");
    sample->fallthrough();
    std::uint32_t sample_count = 1;
    bool sample_trace = false;
    std::string sample_order = "default", sample_out;
    sample->add_option("--n", n)->required();
    sample->add_option("--m", m)->required();
    sample->add_flag("--sink", sink);
    sample->add_option("--count", sample_count, "number of trees");
    sample->add_flag("--trace", sample_trace, "record loop-erased segments");
    sample->add_option("--order", sample_order, "default|trunk-first")
        ->check(CLI::IsMember({"default", "trunk-first"}));
    sample->add_option("--out", sample_out, "output file (default stdout)");

    auto* br = app.add_subcommand(
        "branches", "branch/depth statistics (from a file or sampled here)");
    br->fallthrough();
    std::string br_in, br_trunk = "canonical";
    std::uint32_t br_count = 100;
    std::uint64_t br_min_count = 10;
    bool br_svg = false, br_assert = false;
    br->add_option("--in", br_in, "trees.jsonl from `sample`");
    br->add_option("--n", n);
    br->add_option("--m", m);
    br->add_flag("--sink", sink);
    br->add_option("--count", br_count, "replicas when sampling directly");
    br->add_option("--trunk", br_trunk, "canonical|proof")
        ->check(CLI::IsMember({"canonical", "proof"}));
    br->add_option("--min-count", br_min_count, "fit bin cutoff");
    br->add_flag("--svg", br_svg, "also write hist.svg");
    br->add_flag("--assert-bounds", br_assert,
                 "exit 3 if the tail bound check fails");

    auto* sl =
        app.add_subcommand("slash", "left/right slash statistics (sink graphs)");
    sl->fallthrough();
    std::string sl_in;
    std::uint32_t sl_count = 1000;
    std::uint64_t sl_min_count = 10;
    bool sl_assert = false, sl_svg = false;
    sl->add_option("--in", sl_in, "trees.jsonl from `sample`");
    sl->add_option("--n", n);
    sl->add_option("--m", m);
    sl->add_option("--count", sl_count, "replicas when sampling directly");
    sl->add_option("--min-count", sl_min_count, "fit bin cutoff");
    sl->add_flag("--svg", sl_svg, "also write hist.svg");
    sl->add_flag("--assert-bounds", sl_assert,
                 "exit 3 if the tail bound check fails");

    auto* fit = app.add_subcommand("fit", "exponential fit of a histogram CSV");
    fit->fallthrough();
    std::string fit_input;
    std::uint64_t fit_min_count = 10;
    std::int64_t fit_lmin = -1, fit_lmax = -1;
    fit->add_option("--input", fit_input, "CSV with length,count")->required();
    fit->add_option("--min-count", fit_min_count);
    fit->add_option("--lmin", fit_lmin, "lower fit range bound");
    fit->add_option("--lmax", fit_lmax, "upper fit range bound");

    auto* vu = app.add_subcommand("verify-uniformity",
                                  "chi-square against the enumerated universe");
    vu->fallthrough();
    std::uint32_t vu_samples = 100000;
    vu->add_option("--n", n)->required();
    vu->add_option("--m", m)->required();
    vu->add_flag("--sink", sink);
    vu->add_option("--samples", vu_samples);

    auto* ct = app.add_subcommand("count-trees", "exact spanning-tree count");
    ct->fallthrough();
    ct->add_option("--n", n)->required();
    ct->add_option("--m", m)->required();
    ct->add_flag("--sink", sink);

    auto* sp = app.add_subcommand("sandpile", "abelian sandpile experiments");
    sp->fallthrough();
    sp->require_subcommand(1);
    auto* av = sp->add_subcommand("avalanches", "drive grains, record avalanches");
    av->fallthrough();
    std::uint64_t av_grains = 1000, av_burnin = 0;
    std::string av_init = "max";
    std::int64_t av_site = -1;
    av->add_option("--n", n)->required();
    av->add_option("--m", m)->required();
    av->add_option("--grains", av_grains, "grains to drop");
    av->add_option("--init", av_init, "max|stationary")
        ->check(CLI::IsMember({"max", "stationary"}));
    av->add_option("--burnin", av_burnin,
                   "stationary warm-up additions (default 10*n*m)");
    av->add_option("--site", av_site, "fixed drop site (-1: uniform)");
    auto* rc = sp->add_subcommand("recurrent-count",
                                  "exhaustive burning scan (tiny instances)");
    rc->fallthrough();
    rc->add_option("--n", n)->required();
    rc->add_option("--m", m)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (info->parsed()) return cmd_graph_info(n, m, sink);
        if (sample->parsed())
            return cmd_sample(g_opts, n, m, sink, sample_count, sample_trace,
                              sample_order, sample_out);
        if (br->parsed()) {
            if (!br_in.empty())
                return cmd_branches_from_file(g_opts, br_in, br_trunk,
                                              br_min_count, br_assert);
            ExperimentSpec spec;
            spec.n = n;
            spec.m = m;
            spec.sink = sink;
            spec.replicas = br_count;
            spec.seed = g_opts.seed;
            spec.trunk = br_trunk == "proof" ? TrunkChoice::proof
                                             : TrunkChoice::canonical;
            spec.observable = Observable::branches;
            spec.out_dir = g_opts.out_dir;
            spec.threads = g_opts.threads;
            spec.min_count = br_min_count;
            spec.svg = br_svg;
            return run_direct(spec, br_assert);
        }
        if (sl->parsed()) {
            if (!sl_in.empty())
                return cmd_slash_from_file(g_opts, sl_in, sl_min_count,
                                           sl_assert);
            ExperimentSpec spec;
            spec.n = n;
            spec.m = m;
            spec.sink = true;
            spec.replicas = sl_count;
            spec.seed = g_opts.seed;
            spec.observable = Observable::slash;
            spec.out_dir = g_opts.out_dir;
            spec.threads = g_opts.threads;
            spec.min_count = sl_min_count;
            spec.svg = sl_svg;
            return run_direct(spec, sl_assert);
        }
        if (fit->parsed())
            return cmd_fit(fit_input, fit_min_count,
                           fit_lmin >= 0 ? std::optional<std::int64_t>(fit_lmin)
                                         : std::nullopt,
                           fit_lmax >= 0 ? std::optional<std::int64_t>(fit_lmax)
                                         : std::nullopt);
        if (vu->parsed())
            return cmd_verify_uniformity(n, m, sink, vu_samples, g_opts.seed);
        if (ct->parsed()) {
            std::cout << spanning_tree_count(build(n, m, sink)).get_str()
                      << "\n";
            return kExitOk;
        }
        if (av->parsed())
            return cmd_sandpile_avalanches(g_opts, n, m, av_grains, av_init,
                                           av_burnin, av_site);
        if (rc->parsed()) return cmd_sandpile_recurrent_count(n, m);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
