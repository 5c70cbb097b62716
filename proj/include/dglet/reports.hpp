#pragma once

#include "dglet/counting.hpp"
#include "dglet/eval.hpp"
#include "dglet/static_graphlets.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dglet {

// CSV writers prefix the rows with `# key=value` comment lines echoing the
// counting parameters.
void write_counts_csv(const CountVector &cv, std::ostream &out);          // graphlet_id,count
void write_orbits_csv(const OrbitMatrix &om, std::ostream &out);          // node,orbit_id,count
void write_temporal_counts_csv(const TemporalStaticCounts &tc, std::ostream &out);
void write_temporal_orbits_csv(const TemporalNodeGdv &ng, std::ostream &out);

// JSON documents carry the same parameters plus the full data; graphlet
// counts are serialized as strings because they may exceed 64 bits.
std::string counts_json(const CountVector &cv);
std::string orbits_json(const OrbitMatrix &om);
std::string temporal_counts_json(const TemporalStaticCounts &tc);
std::string temporal_orbits_json(const TemporalNodeGdv &ng);

struct ManifestEntry {
    std::string file;
    int cls = 0;
    int size = 0;
    std::uint64_t seed = 0;
};

void write_manifest(const std::vector<ManifestEntry> &entries, std::ostream &out);
std::vector<ManifestEntry> read_manifest(std::istream &in);
std::vector<ManifestEntry> read_manifest_file(const std::string &path);

std::string eval_report_json(const FullReport &fr);
void write_pr_points_csv(const std::vector<PrPoint> &points, std::ostream &out);

} // namespace dglet
