// dglet: dynamic-graphlet toolkit. Subcommands cover the whole pipeline:
// enumerate (catalog dump), count (one network), generate (synthetic suite),
// evaluate (manifest -> retrieval report).
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <CLI11.hpp>

#include <dglet/catalog.hpp>
#include <dglet/counting.hpp>
#include <dglet/eval.hpp>
#include <dglet/reports.hpp>
#include <dglet/static_graphlets.hpp>
#include <dglet/synth.hpp>
#include <dglet/temporal.hpp>

#include "../src/rng.hpp" // mix_seed: per-instance seeds match generate_suite

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace dglet;

namespace {

int default_threads() {
    if (const char *env = std::getenv("DGLET_THREADS")) {
        int v = 0;
        auto res = std::from_chars(env, env + std::strlen(env), v);
        if (res.ec == std::errc() && *res.ptr == '\0' && v >= 1)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

int parse_class(const std::string &s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size())
        return v >= 0 && v < 9 ? v : -1;
    for (int cls = 0; cls < 9; ++cls)
        if (class_name(cls) == s)
            return cls;
    return -1;
}

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

struct CountConfig {
    std::string input;
    std::string method = "dynamic";
    std::string mode = "regular";
    std::string output;
    std::string format = "csv";
    int max_n = 3, max_k = 3, w = 1, threads = 0;
    double dt = 0, t_w = 2;
    bool raw_times = false;
};

void print_nonzero(const std::vector<BigInt> &counts, const char *prefix) {
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] != 0)
            std::cout << prefix << i << ": " << counts[i].str() << '\n';
}

int run_count(const CountConfig &cfg) {
    auto net = parse_events_file(cfg.input);
    int threads = cfg.threads ? cfg.threads : default_threads();
    bool csv = cfg.format == "csv";

    auto write_pair = [&](const CountVector &cv, const OrbitMatrix &om) {
        if (cfg.output.empty())
            return;
        if (csv) {
            auto c = open_out(cfg.output + ".counts.csv");
            write_counts_csv(cv, c);
            auto o = open_out(cfg.output + ".orbits.csv");
            write_orbits_csv(om, o);
        } else {
            open_out(cfg.output + ".counts.json") << counts_json(cv);
            open_out(cfg.output + ".orbits.json") << orbits_json(om);
        }
    };

    if (cfg.method == "dynamic") {
        Mode mode = cfg.mode == "causal" ? Mode::causal : Mode::regular;
        auto cat = enumerate_catalog(cfg.max_n, cfg.max_k);
        auto [cv, om] = cfg.raw_times
                            ? count_network(net, cfg.dt, cat, mode, threads)
                            : count_snapshots(build_snapshots(net, cfg.t_w, cfg.w), cfg.dt,
                                              cat, mode, threads);
        print_nonzero(cv.counts, "D_");
        write_pair(cv, om);
    } else if (cfg.method == "static") {
        auto g = aggregate(net, cfg.w);
        auto cv = count_static(g, cfg.max_n);
        auto om = gdv(g, cfg.max_n);
        print_nonzero(cv.counts, "G_");
        write_pair(cv, om);
    } else { // static-temporal
        auto series = build_snapshots(net, cfg.t_w, cfg.w);
        auto tc = count_static_temporal(series, cfg.max_n);
        auto ng = node_gdv_temporal(series, cfg.max_n);
        std::vector<BigInt> totals;
        for (const auto &win : tc.windows) {
            totals.resize(win.counts.size());
            for (std::size_t i = 0; i < win.counts.size(); ++i)
                totals[i] += win.counts[i];
        }
        print_nonzero(totals, "G_"); // summed over windows
        if (!cfg.output.empty()) {
            if (csv) {
                auto c = open_out(cfg.output + ".counts.csv");
                write_temporal_counts_csv(tc, c);
                auto o = open_out(cfg.output + ".orbits.csv");
                write_temporal_orbits_csv(ng, o);
            } else {
                open_out(cfg.output + ".counts.json") << temporal_counts_json(tc);
                open_out(cfg.output + ".orbits.json") << temporal_orbits_json(ng);
            }
        }
    }
    return 0;
}

struct GenerateConfig {
    std::string cls_str;
    std::vector<int> sizes;
    int instances = 1;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

int run_generate(const GenerateConfig &cfg) {
    std::vector<int> sizes = cfg.sizes.empty() ? std::vector<int>{500} : cfg.sizes;
    int only = cfg.cls_str.empty() ? -1 : parse_class(cfg.cls_str);
    fs::create_directories(cfg.out_dir);

    std::vector<ManifestEntry> manifest;
    for (int size : sizes)
        for (int cls = 0; cls < 9; ++cls) {
            if (only >= 0 && cls != only)
                continue;
            for (int inst = 0; inst < cfg.instances; ++inst) {
                using detail::mix_seed;
                std::uint64_t s = mix_seed(
                    mix_seed(mix_seed(cfg.seed, (std::uint64_t)size), (std::uint64_t)cls),
                    (std::uint64_t)inst);
                auto net = generate(class_spec(cls, size, s));
                std::string file = class_name(cls) + "-s" + std::to_string(size) + "-i" +
                                   std::to_string(inst) + ".events";
                write_events_file(net, (fs::path(cfg.out_dir) / file).string());
                manifest.push_back({file, cls, size, s});
            }
        }

    auto out = open_out((fs::path(cfg.out_dir) / "manifest.csv").string());
    write_manifest(manifest, out);
    std::cout << "wrote " << manifest.size() << " networks to " << cfg.out_dir << '\n';
    return 0;
}

struct EvaluateConfig {
    std::string manifest;
    std::string method = "dynamic";
    std::string mode = "regular";
    std::string objects = "networks";
    std::string output;
    int max_n = 3, max_k = 3, w = 1, threads = 0, dims = 0, baseline_runs = 10;
    double dt = 1, t_w = 2;
    bool raw_times = false, baseline = false, no_normalize = false;
    std::uint64_t seed = 0;
};

int run_evaluate(const EvaluateConfig &cfg) {
    auto entries = read_manifest_file(cfg.manifest);
    fs::path dir = fs::path(cfg.manifest).parent_path();
    int threads = cfg.threads ? cfg.threads : default_threads();
    bool per_node = cfg.objects == "nodes";

    LabeledVectors input;
    GraphletCatalog cat;
    if (cfg.method == "dynamic")
        cat = enumerate_catalog(cfg.max_n, cfg.max_k);
    Mode mode = cfg.mode == "causal" ? Mode::causal : Mode::regular;

    for (const auto &e : entries) {
        fs::path p = fs::path(e.file).is_absolute() ? fs::path(e.file) : dir / e.file;
        auto net = parse_events_file(p.string());

        auto push_counts = [&](const std::vector<BigInt> &counts) {
            std::vector<double> row;
            row.reserve(counts.size());
            for (const auto &c : counts)
                row.push_back(c.convert_to<double>());
            input.features.push_back(std::move(row));
            input.labels.push_back(e.cls);
            input.objects.push_back(e.file);
        };
        auto push_nodes = [&](const std::vector<std::string> &names, int node_count,
                              auto cell) {
            for (int v = 0; v < node_count; ++v) {
                input.features.push_back(cell(v));
                input.labels.push_back(e.cls);
                input.objects.push_back(e.file + ":" + names[v]);
            }
        };

        if (cfg.method == "dynamic") {
            auto [cv, om] = cfg.raw_times
                                ? count_network(net, cfg.dt, cat, mode, threads)
                                : count_snapshots(build_snapshots(net, cfg.t_w, cfg.w),
                                                  cfg.dt, cat, mode, threads);
            if (per_node)
                push_nodes(om.names, om.node_count, [&](int v) {
                    std::vector<double> row(om.orbit_count);
                    for (int o = 0; o < om.orbit_count; ++o)
                        row[o] = (double)om.at(v, o);
                    return row;
                });
            else
                push_counts(cv.counts);
        } else if (cfg.method == "static") {
            auto g = aggregate(net, cfg.w);
            if (per_node) {
                auto om = gdv(g, cfg.max_n);
                push_nodes(om.names, om.node_count, [&](int v) {
                    std::vector<double> row(om.orbit_count);
                    for (int o = 0; o < om.orbit_count; ++o)
                        row[o] = (double)om.at(v, o);
                    return row;
                });
            } else {
                push_counts(count_static(g, cfg.max_n).counts);
            }
        } else { // static-temporal
            auto series = build_snapshots(net, cfg.t_w, cfg.w);
            if (per_node) {
                auto ng = node_gdv_temporal(series, cfg.max_n);
                push_nodes(ng.names, (int)ng.names.size(), [&](int v) {
                    std::vector<double> row((std::size_t)ng.window_count *
                                            ng.orbits_per_window);
                    for (int w = 0; w < ng.window_count; ++w)
                        for (int o = 0; o < ng.orbits_per_window; ++o)
                            row[(std::size_t)w * ng.orbits_per_window + o] =
                                (double)ng.at(v, w, o);
                    return row;
                });
            } else {
                push_counts(count_static_temporal(series, cfg.max_n).flat);
            }
        }
    }

    // window counts differ between networks: pad the flat vectors with zeros
    if (cfg.method == "static-temporal") {
        std::size_t width = 0;
        for (const auto &row : input.features)
            width = std::max(width, row.size());
        for (auto &row : input.features)
            row.resize(width, 0.0);
    }

    EvalOptions opt;
    opt.dims = cfg.dims ? cfg.dims : (per_node ? 3 : 2);
    opt.normalize = !cfg.no_normalize;
    opt.baselines = cfg.baseline;
    opt.baseline_runs = cfg.baseline_runs;
    opt.seed = cfg.seed;
    auto full = evaluate(input, opt);

    if (cfg.output.empty()) {
        std::cout << eval_report_json(full);
    } else {
        open_out(cfg.output + ".json") << eval_report_json(full);
        auto pr = open_out(cfg.output + ".pr.csv");
        write_pr_points_csv(full.report.pr_points, pr);
        std::cout << "aupr=" << full.report.aupr << " auroc=" << full.report.auroc
                  << " break_even=" << full.report.break_even << " max_f=" << full.report.max_f
                  << " wilcoxon_p_less=" << full.report.wilcoxon_p_less << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"dynamic graphlet counting and evaluation toolkit"};
    app.require_subcommand(1);

    auto *enumerate = app.add_subcommand("enumerate", "dump the graphlet catalog and count table");
    int enum_n = 0, enum_k = 0;
    enumerate->add_option("--max-n", enum_n, "largest node count")->required();
    enumerate->add_option("--max-k", enum_k, "largest event count")->required();

    CountConfig cc;
    auto *count = app.add_subcommand("count", "count graphlets in one event file");
    count->add_option("input", cc.input, "event file: 'u v t [sigma]' per line")->required();
    count->add_option("--method", cc.method, "counting method")
        ->check(CLI::IsMember({"dynamic", "static", "static-temporal"}))
        ->capture_default_str();
    count->add_option("--mode", cc.mode, "dynamic counting mode")
        ->check(CLI::IsMember({"regular", "causal"}))
        ->capture_default_str();
    count->add_option("--max-n", cc.max_n, "largest node count")->capture_default_str();
    count->add_option("--max-k", cc.max_k, "largest event count (dynamic)")
        ->capture_default_str();
    auto *dt_opt = count->add_option(
        "--dt", cc.dt, "extension window; snapshot units unless --raw-times (dynamic)");
    count->add_option("--t-w", cc.t_w, "snapshot window width")->capture_default_str();
    count->add_option("--w", cc.w, "events per pair needed for an edge")->capture_default_str();
    count->add_flag("--raw-times", cc.raw_times,
                    "count on raw timestamps instead of the snapshot pipeline");
    count->add_option("--threads", cc.threads,
                      "worker threads (default: DGLET_THREADS or hardware)");
    count->add_option("--output", cc.output, "prefix for .counts/.orbits files");
    count->add_option("--format", cc.format, "output file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    GenerateConfig gc;
    auto *generate = app.add_subcommand("generate", "write synthetic networks and a manifest");
    generate->add_option("--class", gc.cls_str, "single class: index 0..8 or name (default all)")
        ->check([](const std::string &s) -> std::string {
            return parse_class(s) >= 0 ? std::string{}
                                       : "unknown class '" + s + "'";
        });
    generate->add_option("--size", gc.sizes, "target node counts (repeatable, default 500)");
    generate->add_option("--instances", gc.instances, "instances per class")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--seed", gc.seed, "suite seed")->capture_default_str();
    generate->add_option("--out-dir", gc.out_dir, "output directory")->capture_default_str();

    EvaluateConfig ec;
    auto *evaluate = app.add_subcommand("evaluate", "retrieval evaluation over a manifest");
    evaluate->add_option("--manifest", ec.manifest, "manifest csv from 'generate'")->required();
    evaluate->add_option("--method", ec.method, "feature method")
        ->check(CLI::IsMember({"dynamic", "static", "static-temporal"}))
        ->capture_default_str();
    evaluate->add_option("--mode", ec.mode, "dynamic counting mode")
        ->check(CLI::IsMember({"regular", "causal"}))
        ->capture_default_str();
    evaluate->add_option("--objects", ec.objects, "feature objects")
        ->check(CLI::IsMember({"networks", "nodes"}))
        ->capture_default_str();
    evaluate->add_option("--max-n", ec.max_n, "largest node count")->capture_default_str();
    evaluate->add_option("--max-k", ec.max_k, "largest event count (dynamic)")
        ->capture_default_str();
    evaluate->add_option("--dt", ec.dt, "extension window (dynamic)")->capture_default_str();
    evaluate->add_option("--t-w", ec.t_w, "snapshot window width")->capture_default_str();
    evaluate->add_option("--w", ec.w, "events per pair needed for an edge")
        ->capture_default_str();
    evaluate->add_flag("--raw-times", ec.raw_times,
                       "count on raw timestamps instead of the snapshot pipeline");
    evaluate->add_option("--dims", ec.dims,
                         "PCA dimensions (default: 2 for networks, 3 for nodes)");
    evaluate->add_flag("--baseline", ec.baseline, "append randomized baseline summaries");
    evaluate->add_option("--baseline-runs", ec.baseline_runs, "runs per baseline scheme")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_flag("--no-normalize", ec.no_normalize,
                       "skip proportion normalization before PCA");
    evaluate->add_option("--seed", ec.seed, "baseline seed")->capture_default_str();
    evaluate->add_option("--threads", ec.threads,
                         "worker threads (default: DGLET_THREADS or hardware)");
    evaluate->add_option("--output", ec.output, "prefix for .json and .pr.csv files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (enumerate->parsed()) {
            auto cat = enumerate_catalog(enum_n, enum_k);
            dump_catalog(cat, std::cout);
            std::cout << '\n';
            dump_count_table(enum_n, enum_k, std::cout);
            return 0;
        }
        if (count->parsed()) {
            if (cc.method == "dynamic" && dt_opt->count() == 0) {
                std::cerr << "error: --dt is required with --method dynamic\n";
                return 2;
            }
            return run_count(cc);
        }
        if (generate->parsed())
            return run_generate(gc);
        if (evaluate->parsed())
            return run_evaluate(ec);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
