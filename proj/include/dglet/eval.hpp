#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dglet {

// Raised for data-dependent evaluation failures (degenerate inputs).
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string &what) : std::runtime_error(what) {}
};

struct LabeledVectors {
    std::vector<std::string> objects;
    std::vector<std::vector<double>> features; // equal length, non-negative
    std::vector<int> labels;
};

// Divides each vector by its sum, leaving all-zero vectors untouched;
// returns the indices of those zero vectors.
std::vector<int> normalize_proportions(std::vector<std::vector<double>> &features);

struct PcaResult {
    std::vector<std::vector<double>> coords; // objects x dims
    std::vector<double> explained;           // variance fraction per component
};

// Projection onto the top-`dims` covariance eigenvectors, each sign-fixed
// so its largest-magnitude entry is positive. Requires >= dims+1 objects;
// throws EvalError when the features have zero variance.
PcaResult pca_embed(const std::vector<std::vector<double>> &features, int dims);

// Euclidean distances in condensed order: (0,1), (0,2), ..., (1,2), ...
std::vector<double> pairwise_distances(const std::vector<std::vector<double>> &coords);

struct PrPoint {
    double k = 0; // retrieved fraction of all pairs
    double precision = 0;
    double recall = 0;
};

struct RetrievalCurve {
    std::vector<PrPoint> points;
    bool degenerate_single_class = false; // all labels equal: precision pinned at 1
};

// Pair-retrieval curve over the schedule 0.01%..1% in 0.01% steps, then
// 2%..100% in 1% steps. Each point retrieves the ceil(k*P) closest pairs
// extended to all ties at the threshold distance; a pair is positive when
// its two objects share a label. Throws EvalError when no positive pair
// exists.
RetrievalCurve retrieval_curve(const std::vector<double> &distances,
                               const std::vector<int> &labels);

struct EvalReport {
    double aupr = 0;
    double auroc = 0;
    double break_even = 0;
    double max_f = 0;
    std::vector<PrPoint> pr_points;
    double wilcoxon_p = 1;      // two-sided
    double wilcoxon_p_less = 1; // one-sided: intra-class distances smaller
    bool degenerate_single_class = false;
};

// AUPR: trapezoid over (recall, precision), prepended with (0, first
// precision). AUROC: exact rank statistic (ties count half). break_even:
// precision at the point minimizing |precision - recall|. max_f: best
// harmonic mean. Wilcoxon compares intra- vs inter-class distances.
EvalReport summarize(const RetrievalCurve &curve, const std::vector<double> &distances,
                     const std::vector<int> &labels);

struct WilcoxonResult {
    double p_two_sided = 1;
    double p_less = 1;    // first sample stochastically smaller
    double p_greater = 1; // first sample stochastically larger
    double w = 0;         // rank sum of the first sample
};

// Normal approximation with tie and continuity corrections. Both samples
// must be non-empty; fully tied data gives p = 1.
WilcoxonResult wilcoxon_rank_sum(const std::vector<double> &first,
                                 const std::vector<double> &second);

struct BaselineStats {
    double mean = 0;
    double stddev = 0; // sample standard deviation over runs
};

struct BaselineScheme {
    std::string name;
    BaselineStats aupr, auroc, break_even, max_f;
};

struct BaselineReport {
    std::vector<BaselineScheme> schemes; // random-embedding, label-permutation
    double best_aupr = 0;                // max of scheme means, per metric
    double best_auroc = 0;
    double best_break_even = 0;
    double best_max_f = 0;
};

// Two randomization schemes: objects embedded at standard-normal
// coordinates in `dims` dimensions, and labels permuted over the actual
// distances. Each is averaged over `runs` seeded repetitions.
BaselineReport random_baselines(int n_objects, const std::vector<int> &labels,
                                const std::vector<double> &actual_distances, int dims,
                                int runs = 10, std::uint64_t seed = 0);

struct EvalOptions {
    int dims = 2;           // 2 for networks, 3 for nodes
    bool normalize = true;  // proportion normalization before PCA
    bool baselines = false;
    int baseline_runs = 10;
    std::uint64_t seed = 0;
};

struct FullReport {
    EvalReport report;
    std::vector<double> explained;        // per kept PCA component
    std::vector<int> zero_feature_objects;
    bool has_baselines = false;
    BaselineReport baselines;
};

// The whole pipeline: (optional) normalization, PCA embedding, pairwise
// distances, retrieval curve, summary, optional baselines.
FullReport evaluate(const LabeledVectors &input, const EvalOptions &options);

} // namespace dglet
