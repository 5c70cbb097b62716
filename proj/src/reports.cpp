#include "dglet/reports.hpp"

#include "text.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dglet {

namespace {

using detail::fmt_double;
using json = nlohmann::ordered_json;

void echo_params(const CountParams &p, std::ostream &out) {
    out << "# method=" << p.method << '\n';
    if (p.method == "dynamic") {
        out << "# mode=" << mode_name(p.mode) << '\n';
        out << "# dt=" << fmt_double(p.dt) << '\n';
    }
    out << "# max_n=" << p.max_n << '\n';
    if (p.method == "dynamic")
        out << "# max_k=" << p.max_k << '\n';
    if (p.window_size != 0) {
        out << "# window_size=" << fmt_double(p.window_size) << '\n';
        out << "# threshold=" << p.threshold << '\n';
    }
}

json params_json(const CountParams &p) {
    json j;
    j["method"] = p.method;
    if (p.method == "dynamic") {
        j["mode"] = mode_name(p.mode);
        j["dt"] = p.dt;
    }
    j["max_n"] = p.max_n;
    if (p.method == "dynamic")
        j["max_k"] = p.max_k;
    if (p.window_size != 0) {
        j["window_size"] = p.window_size;
        j["threshold"] = p.threshold;
    }
    return j;
}

std::string node_token(const std::vector<std::string> &names, int node) {
    return node < (int)names.size() && !names[node].empty() ? names[node]
                                                            : std::to_string(node);
}

} // namespace

void write_counts_csv(const CountVector &cv, std::ostream &out) {
    echo_params(cv.params, out);
    out << "graphlet_id,count\n";
    for (std::size_t i = 0; i < cv.counts.size(); ++i)
        out << i << ',' << cv.counts[i].str() << '\n';
}

void write_orbits_csv(const OrbitMatrix &om, std::ostream &out) {
    echo_params(om.params, out);
    out << "node,orbit_id,count\n";
    for (int v = 0; v < om.node_count; ++v)
        for (int o = 0; o < om.orbit_count; ++o)
            if (auto c = om.at(v, o))
                out << node_token(om.names, v) << ',' << o << ',' << c << '\n';
}

void write_temporal_counts_csv(const TemporalStaticCounts &tc, std::ostream &out) {
    echo_params(tc.params, out);
    out << "window,graphlet_id,count\n";
    for (std::size_t w = 0; w < tc.windows.size(); ++w)
        for (std::size_t i = 0; i < tc.windows[w].counts.size(); ++i)
            out << w << ',' << i << ',' << tc.windows[w].counts[i].str() << '\n';
}

void write_temporal_orbits_csv(const TemporalNodeGdv &ng, std::ostream &out) {
    echo_params(ng.params, out);
    out << "node,window,orbit_id,count\n";
    for (int v = 0; v < (int)ng.names.size(); ++v)
        for (int w = 0; w < ng.window_count; ++w)
            for (int o = 0; o < ng.orbits_per_window; ++o)
                if (auto c = ng.at(v, w, o))
                    out << node_token(ng.names, v) << ',' << w << ',' << o << ',' << c << '\n';
}

std::string counts_json(const CountVector &cv) {
    json j;
    j["params"] = params_json(cv.params);
    json counts = json::array();
    for (const auto &c : cv.counts)
        counts.push_back(c.str());
    j["counts"] = counts;
    return j.dump(2) + "\n";
}

std::string orbits_json(const OrbitMatrix &om) {
    json j;
    j["params"] = params_json(om.params);
    j["orbit_count"] = om.orbit_count;
    json nodes = json::array();
    for (int v = 0; v < om.node_count; ++v) {
        json row;
        row["node"] = node_token(om.names, v);
        json cells = json::object();
        for (int o = 0; o < om.orbit_count; ++o)
            if (auto c = om.at(v, o))
                cells[std::to_string(o)] = c;
        row["orbits"] = cells;
        nodes.push_back(row);
    }
    j["nodes"] = nodes;
    return j.dump(2) + "\n";
}

std::string temporal_counts_json(const TemporalStaticCounts &tc) {
    json j;
    j["params"] = params_json(tc.params);
    json windows = json::array();
    for (const auto &w : tc.windows) {
        json counts = json::array();
        for (const auto &c : w.counts)
            counts.push_back(c.str());
        windows.push_back(counts);
    }
    j["windows"] = windows;
    return j.dump(2) + "\n";
}

std::string temporal_orbits_json(const TemporalNodeGdv &ng) {
    json j;
    j["params"] = params_json(ng.params);
    j["window_count"] = ng.window_count;
    j["orbits_per_window"] = ng.orbits_per_window;
    json nodes = json::array();
    for (int v = 0; v < (int)ng.names.size(); ++v) {
        json row;
        row["node"] = node_token(ng.names, v);
        json cells = json::object();
        for (int w = 0; w < ng.window_count; ++w)
            for (int o = 0; o < ng.orbits_per_window; ++o)
                if (auto c = ng.at(v, w, o))
                    cells[std::to_string(w) + ":" + std::to_string(o)] = c;
        row["orbits"] = cells;
        nodes.push_back(row);
    }
    j["nodes"] = nodes;
    return j.dump(2) + "\n";
}

void write_manifest(const std::vector<ManifestEntry> &entries, std::ostream &out) {
    out << "file,class,size,seed\n";
    for (const auto &e : entries)
        out << e.file << ',' << e.cls << ',' << e.size << ',' << e.seed << '\n';
}

std::vector<ManifestEntry> read_manifest(std::istream &in) {
    std::vector<ManifestEntry> entries;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != "file,class,size,seed")
                throw ParseError(lineno, "manifest must start with 'file,class,size,seed'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            cols.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (cols.size() != 4)
            throw ParseError(lineno, "expected 4 comma-separated columns");
        ManifestEntry e;
        e.file = cols[0];
        auto parse_int = [&](const std::string &s, auto &out_val, const char *what) {
            auto res = std::from_chars(s.data(), s.data() + s.size(), out_val);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                throw ParseError(lineno, std::string("bad ") + what + ": '" + s + "'");
        };
        parse_int(cols[1], e.cls, "class");
        parse_int(cols[2], e.size, "size");
        parse_int(cols[3], e.seed, "seed");
        entries.push_back(std::move(e));
    }
    if (!header_seen)
        throw ParseError(lineno, "empty manifest");
    return entries;
}

std::vector<ManifestEntry> read_manifest_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open manifest: " + path);
    return read_manifest(in);
}

std::string eval_report_json(const FullReport &fr) {
    json j;
    j["aupr"] = fr.report.aupr;
    j["auroc"] = fr.report.auroc;
    j["break_even"] = fr.report.break_even;
    j["max_f"] = fr.report.max_f;
    j["wilcoxon_p"] = fr.report.wilcoxon_p;
    j["wilcoxon_p_less"] = fr.report.wilcoxon_p_less;
    j["degenerate_single_class"] = fr.report.degenerate_single_class;
    j["explained_variance"] = fr.explained;
    j["zero_feature_objects"] = fr.zero_feature_objects;
    json pts = json::array();
    for (const auto &p : fr.report.pr_points)
        pts.push_back({{"k", p.k}, {"precision", p.precision}, {"recall", p.recall}});
    j["pr_points"] = pts;
    if (fr.has_baselines) {
        json schemes = json::array();
        for (const auto &s : fr.baselines.schemes) {
            json sj;
            sj["name"] = s.name;
            auto stat = [](const BaselineStats &b) {
                return json{{"mean", b.mean}, {"stddev", b.stddev}};
            };
            sj["aupr"] = stat(s.aupr);
            sj["auroc"] = stat(s.auroc);
            sj["break_even"] = stat(s.break_even);
            sj["max_f"] = stat(s.max_f);
            schemes.push_back(sj);
        }
        j["baselines"] = {{"schemes", schemes},
                          {"best",
                           {{"aupr", fr.baselines.best_aupr},
                            {"auroc", fr.baselines.best_auroc},
                            {"break_even", fr.baselines.best_break_even},
                            {"max_f", fr.baselines.best_max_f}}}};
    }
    return j.dump(2) + "\n";
}

void write_pr_points_csv(const std::vector<PrPoint> &points, std::ostream &out) {
    out << "k,precision,recall\n";
    for (const auto &p : points)
        out << fmt_double(p.k) << ',' << fmt_double(p.precision) << ',' << fmt_double(p.recall)
            << '\n';
}

} // namespace dglet
