#include "dglet/eval.hpp"

#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dglet {

namespace {

using detail::Rng;
using detail::mix_seed;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::vector<char> positive_mask(const std::vector<int> &labels, std::int64_t &npos) {
    const std::int64_t n = (std::int64_t)labels.size();
    std::vector<char> pos;
    pos.reserve((std::size_t)(n * (n - 1) / 2));
    npos = 0;
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) {
            bool p = labels[i] == labels[j];
            pos.push_back(p);
            npos += p;
        }
    return pos;
}

// Retrieval schedule in basis points of the pair count: 0.01%..1% in
// 0.01% steps, then 2%..100% in 1% steps, dense where precision moves fast.
std::vector<int> schedule_bp() {
    std::vector<int> bp;
    for (int i = 1; i <= 100; ++i)
        bp.push_back(i);
    for (int i = 200; i <= 10000; i += 100)
        bp.push_back(i);
    return bp;
}

} // namespace

std::vector<int> normalize_proportions(std::vector<std::vector<double>> &features) {
    std::vector<int> zero_rows;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double sum = std::accumulate(features[i].begin(), features[i].end(), 0.0);
        if (sum == 0) {
            zero_rows.push_back((int)i);
            continue;
        }
        for (double &x : features[i])
            x /= sum;
    }
    return zero_rows;
}

PcaResult pca_embed(const std::vector<std::vector<double>> &features, int dims) {
    const int n = (int)features.size();
    if (dims < 1)
        throw std::invalid_argument("pca_embed: dims must be >= 1");
    if (n < dims + 1)
        throw std::invalid_argument("pca_embed: need at least dims+1 objects");
    const int d = (int)features[0].size();
    for (const auto &row : features)
        if ((int)row.size() != d)
            throw std::invalid_argument("pca_embed: ragged feature vectors");
    if (dims > d)
        throw std::invalid_argument("pca_embed: dims exceeds feature dimension");

    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            x(i, j) = features[i][j];
    x.rowwise() -= x.colwise().mean().eval();

    Eigen::MatrixXd cov = x.transpose() * x / double(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
        throw EvalError("pca_embed: eigendecomposition failed");

    double total = 0;
    for (int i = 0; i < d; ++i)
        total += std::max(0.0, es.eigenvalues()[i]);
    if (total <= 0)
        throw EvalError("pca_embed: features have zero variance");

    Eigen::MatrixXd w(d, dims);
    PcaResult res;
    res.explained.resize(dims);
    for (int c = 0; c < dims; ++c) {
        const int src = d - 1 - c; // eigenvalues come back ascending
        Eigen::VectorXd v = es.eigenvectors().col(src);
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (std::abs(v[i]) > std::abs(v[arg]))
                arg = i;
        if (v[arg] < 0)
            v = -v;
        w.col(c) = v;
        res.explained[c] = std::max(0.0, es.eigenvalues()[src]) / total;
    }

    Eigen::MatrixXd proj = x * w;
    res.coords.assign(n, std::vector<double>(dims));
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < dims; ++c)
            res.coords[i][c] = proj(i, c);
    return res;
}

std::vector<double> pairwise_distances(const std::vector<std::vector<double>> &coords) {
    const std::int64_t n = (std::int64_t)coords.size();
    std::vector<double> dist;
    dist.reserve((std::size_t)(n * (n - 1) / 2));
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = i + 1; j < n; ++j) {
            double s = 0;
            for (std::size_t c = 0; c < coords[i].size(); ++c) {
                double diff = coords[i][c] - coords[j][c];
                s += diff * diff;
            }
            dist.push_back(std::sqrt(s));
        }
    return dist;
}

RetrievalCurve retrieval_curve(const std::vector<double> &distances,
                               const std::vector<int> &labels) {
    const std::int64_t n = (std::int64_t)labels.size();
    const std::int64_t P = n * (n - 1) / 2;
    if ((std::int64_t)distances.size() != P)
        throw std::invalid_argument("retrieval_curve: distance count does not match labels");
    if (P < 1)
        throw EvalError("retrieval_curve: need at least 2 objects");
    for (double d : distances)
        if (!std::isfinite(d))
            throw std::invalid_argument("retrieval_curve: distances must be finite");

    std::int64_t npos = 0;
    std::vector<char> pos = positive_mask(labels, npos);
    if (npos == 0)
        throw EvalError("retrieval_curve: no same-label pairs");

    std::vector<std::int64_t> order(P);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int64_t a, std::int64_t b) { return distances[a] < distances[b]; });
    std::vector<double> sorted_d(P);
    std::vector<std::int64_t> prefix_tp(P + 1, 0);
    for (std::int64_t i = 0; i < P; ++i) {
        sorted_d[i] = distances[order[i]];
        prefix_tp[i + 1] = prefix_tp[i] + pos[order[i]];
    }

    RetrievalCurve curve;
    curve.degenerate_single_class = npos == P;
    for (int bp : schedule_bp()) {
        const std::int64_t m = (bp * P + 9999) / 10000; // ceil, >= 1
        const double thresh = sorted_d[m - 1];
        const std::int64_t ret =
            std::upper_bound(sorted_d.begin(), sorted_d.end(), thresh) - sorted_d.begin();
        const std::int64_t tp = prefix_tp[ret];
        curve.points.push_back(
            {bp / 10000.0, (double)tp / (double)ret, (double)tp / (double)npos});
    }
    return curve;
}

EvalReport summarize(const RetrievalCurve &curve, const std::vector<double> &distances,
                     const std::vector<int> &labels) {
    if (curve.points.empty())
        throw std::invalid_argument("summarize: empty curve");
    EvalReport r;
    r.pr_points = curve.points;
    r.degenerate_single_class = curve.degenerate_single_class;

    double prev_p = curve.points.front().precision;
    double prev_r = 0;
    double area = 0;
    for (const auto &pt : curve.points) {
        area += (pt.recall - prev_r) * (pt.precision + prev_p) / 2;
        prev_r = pt.recall;
        prev_p = pt.precision;
    }
    r.aupr = area;

    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto &pt : curve.points) {
        double gap = std::abs(pt.precision - pt.recall);
        if (gap < best_gap) {
            best_gap = gap;
            r.break_even = pt.precision;
        }
        if (pt.precision + pt.recall > 0)
            r.max_f = std::max(r.max_f, 2 * pt.precision * pt.recall / (pt.precision + pt.recall));
    }

    std::int64_t npos = 0;
    std::vector<char> pos = positive_mask(labels, npos);
    const std::int64_t P = (std::int64_t)pos.size();
    const std::int64_t nneg = P - npos;
    if (nneg == 0) {
        r.auroc = 1.0; // no cross-class pairs to rank against
        return r;
    }

    std::vector<std::int64_t> order(P);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int64_t a, std::int64_t b) { return distances[a] < distances[b]; });
    double rank_pos = 0;
    std::int64_t i = 0;
    while (i < P) {
        std::int64_t j = i;
        while (j < P && distances[order[j]] == distances[order[i]])
            ++j;
        const double avg = (double)(i + j + 1) / 2; // ranks i+1 .. j
        for (std::int64_t t = i; t < j; ++t)
            if (pos[order[t]])
                rank_pos += avg;
        i = j;
    }
    const double u = rank_pos - (double)npos * (double)(npos + 1) / 2;
    r.auroc = 1.0 - u / ((double)npos * (double)nneg);

    std::vector<double> intra, inter;
    intra.reserve(npos);
    inter.reserve(nneg);
    for (std::int64_t idx = 0; idx < P; ++idx)
        (pos[idx] ? intra : inter).push_back(distances[idx]);
    WilcoxonResult wr = wilcoxon_rank_sum(intra, inter);
    r.wilcoxon_p = wr.p_two_sided;
    r.wilcoxon_p_less = wr.p_less;
    return r;
}

WilcoxonResult wilcoxon_rank_sum(const std::vector<double> &first,
                                 const std::vector<double> &second) {
    const std::int64_t n1 = (std::int64_t)first.size();
    const std::int64_t n2 = (std::int64_t)second.size();
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("wilcoxon_rank_sum: both samples must be non-empty");
    const std::int64_t N = n1 + n2;

    std::vector<std::pair<double, char>> merged;
    merged.reserve(N);
    for (double v : first)
        merged.push_back({v, 1});
    for (double v : second)
        merged.push_back({v, 0});
    std::sort(merged.begin(), merged.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });

    WilcoxonResult res;
    double tie_sum = 0; // sum of t^3 - t over tie groups
    std::int64_t i = 0;
    while (i < N) {
        std::int64_t j = i;
        while (j < N && merged[j].first == merged[i].first)
            ++j;
        const double avg = (double)(i + j + 1) / 2;
        for (std::int64_t t = i; t < j; ++t)
            if (merged[t].second)
                res.w += avg;
        const double g = (double)(j - i);
        tie_sum += g * g * g - g;
        i = j;
    }

    const double mu = (double)n1 * (double)(N + 1) / 2;
    const double var = (double)n1 * (double)n2 / 12.0 *
                       ((double)(N + 1) - tie_sum / ((double)N * (double)(N - 1)));
    if (var <= 0)
        return res; // everything tied: no evidence, p = 1
    const double sigma = std::sqrt(var);
    res.p_less = normal_cdf((res.w - mu + 0.5) / sigma);
    res.p_greater = 1.0 - normal_cdf((res.w - mu - 0.5) / sigma);
    res.p_two_sided = std::min(1.0, 2 * std::min(res.p_less, res.p_greater));
    return res;
}

BaselineReport random_baselines(int n_objects, const std::vector<int> &labels,
                                const std::vector<double> &actual_distances, int dims, int runs,
                                std::uint64_t seed) {
    if (n_objects < 2 || (int)labels.size() != n_objects)
        throw std::invalid_argument("random_baselines: bad labels");
    if ((std::int64_t)actual_distances.size() !=
        (std::int64_t)n_objects * (n_objects - 1) / 2)
        throw std::invalid_argument("random_baselines: distance count mismatch");
    if (runs < 1)
        throw std::invalid_argument("random_baselines: runs must be >= 1");
    if (dims < 1)
        throw std::invalid_argument("random_baselines: dims must be >= 1");

    auto stats = [](const std::vector<double> &xs) {
        BaselineStats s;
        for (double x : xs)
            s.mean += x;
        s.mean /= (double)xs.size();
        if (xs.size() > 1) {
            double ss = 0;
            for (double x : xs)
                ss += (x - s.mean) * (x - s.mean);
            s.stddev = std::sqrt(ss / (double)(xs.size() - 1));
        }
        return s;
    };

    BaselineReport report;
    for (int scheme = 0; scheme < 2; ++scheme) {
        std::vector<double> aupr, auroc, be, mf;
        for (int run = 0; run < runs; ++run) {
            Rng rng(mix_seed(mix_seed(seed, (std::uint64_t)scheme), (std::uint64_t)run));
            RetrievalCurve curve;
            EvalReport er;
            if (scheme == 0) {
                std::vector<std::vector<double>> coords(n_objects, std::vector<double>(dims));
                for (auto &row : coords)
                    for (double &x : row)
                        x = rng.normal();
                std::vector<double> dist = pairwise_distances(coords);
                curve = retrieval_curve(dist, labels);
                er = summarize(curve, dist, labels);
            } else {
                std::vector<int> perm = labels;
                rng.shuffle(perm);
                curve = retrieval_curve(actual_distances, perm);
                er = summarize(curve, actual_distances, perm);
            }
            aupr.push_back(er.aupr);
            auroc.push_back(er.auroc);
            be.push_back(er.break_even);
            mf.push_back(er.max_f);
        }
        BaselineScheme bs;
        bs.name = scheme == 0 ? "random-embedding" : "label-permutation";
        bs.aupr = stats(aupr);
        bs.auroc = stats(auroc);
        bs.break_even = stats(be);
        bs.max_f = stats(mf);
        report.schemes.push_back(std::move(bs));
    }
    for (const auto &bs : report.schemes) {
        report.best_aupr = std::max(report.best_aupr, bs.aupr.mean);
        report.best_auroc = std::max(report.best_auroc, bs.auroc.mean);
        report.best_break_even = std::max(report.best_break_even, bs.break_even.mean);
        report.best_max_f = std::max(report.best_max_f, bs.max_f.mean);
    }
    return report;
}

FullReport evaluate(const LabeledVectors &input, const EvalOptions &options) {
    const std::size_t n = input.features.size();
    if (n == 0)
        throw std::invalid_argument("evaluate: no objects");
    if (input.labels.size() != n)
        throw std::invalid_argument("evaluate: labels/features size mismatch");
    if (!input.objects.empty() && input.objects.size() != n)
        throw std::invalid_argument("evaluate: objects/features size mismatch");
    for (const auto &row : input.features)
        for (double x : row)
            if (!std::isfinite(x) || x < 0)
                throw std::invalid_argument("evaluate: features must be finite and non-negative");
    std::vector<int> sorted_labels = input.labels;
    std::sort(sorted_labels.begin(), sorted_labels.end());
    if (std::unique(sorted_labels.begin(), sorted_labels.end()) == sorted_labels.begin() + 1)
        throw EvalError("evaluate: need at least 2 distinct labels");

    std::vector<std::vector<double>> feats = input.features;
    FullReport fr;
    if (options.normalize)
        fr.zero_feature_objects = normalize_proportions(feats);
    PcaResult pca = pca_embed(feats, options.dims);
    fr.explained = pca.explained;
    std::vector<double> dist = pairwise_distances(pca.coords);
    RetrievalCurve curve = retrieval_curve(dist, input.labels);
    fr.report = summarize(curve, dist, input.labels);
    if (options.baselines) {
        fr.has_baselines = true;
        fr.baselines = random_baselines((int)n, input.labels, dist, options.dims,
                                        options.baseline_runs, options.seed);
    }
    return fr;
}

} // namespace dglet
