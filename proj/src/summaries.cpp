#include "fgm/summaries.hpp"

#include <algorithm>
#include <set>

namespace fgm {

void NodeMetadata::validate(int p) const {
    if (static_cast<int>(region.size()) != p)
        throw MissingMetadataError("region label required for every node");
    if (!mirror.empty()) {
        if (static_cast<int>(mirror.size()) != p)
            throw MissingMetadataError("mirror map must cover every node");
        for (int v = 0; v < p; ++v) {
            const int m = mirror[v];
            if (m < -1 || m >= p) throw MissingMetadataError("mirror index out of range");
            if (m >= 0 && mirror[m] != v)
                throw MissingMetadataError("mirror map must be an involution");
        }
    }
}

EdgeProbMatrix inclusion_probs(const ChainTrace& trace) {
    if (trace.size() == 0) throw EmptyTraceError("trace is empty");
    EdgeProbMatrix probs = Eigen::MatrixXd::Zero(trace.p, trace.p);
    for (const auto& g : trace.graphs) {
        for (const auto& e : g) {
            probs(e.a, e.b) += 1.0;
            probs(e.b, e.a) += 1.0;
        }
    }
    probs /= double(trace.size());
    return probs;
}

AccuracyStats accuracy_stats(const ChainTrace& trace, const DecomposableGraph& truth) {
    if (trace.size() == 0) throw EmptyTraceError("trace is empty");
    if (trace.p != truth.node_count())
        throw DimensionMismatchError("trace/truth node counts differ");
    const int p = trace.p;
    const int n_pairs = p * (p - 1) / 2;
    const int n_true = truth.edge_count();
    const int n_non = n_pairs - n_true;

    AccuracyStats out;
    for (const auto& g : trace.graphs) {
        std::set<Edge> edges(g.begin(), g.end());
        int hits = 0, false_pos = 0;
        for (const auto& e : g)
            if (truth.has_edge(e.a, e.b)) ++hits;
        false_pos = static_cast<int>(edges.size()) - hits;
        const int misses = n_true - hits;
        out.mis_rate += double(false_pos + misses) / double(n_pairs);
        if (n_true > 0) out.sensitivity += double(hits) / double(n_true);
        if (n_non > 0) out.specificity += double(n_non - false_pos) / double(n_non);
        out.mean_edges += double(edges.size());
    }
    const double k = double(trace.size());
    out.mis_rate /= k;
    out.sensitivity = (n_true > 0) ? out.sensitivity / k : 1.0;
    out.specificity = (n_non > 0) ? out.specificity / k : 1.0;
    out.mean_edges /= k;
    return out;
}

std::vector<Edge> threshold_graph(const EdgeProbMatrix& probs, double tau) {
    if (tau < 0.0 || tau > 1.0) throw DomainError("tau must lie in [0,1]");
    std::vector<Edge> out;
    for (Eigen::Index i = 0; i < probs.rows(); ++i)
        for (Eigen::Index j = i + 1; j < probs.cols(); ++j)
            if (probs(i, j) > tau) out.emplace_back(int(i), int(j));
    return out;
}

RegionStats region_asymmetry_stats(const ChainTrace& trace, const NodeMetadata& meta) {
    if (trace.size() == 0) throw EmptyTraceError("trace is empty");
    meta.validate(trace.p);

    RegionStats out;
    {
        std::set<std::string> labels(meta.region.begin(), meta.region.end());
        out.regions.assign(labels.begin(), labels.end());
    }
    auto region_index = [&](int node) {
        return std::distance(out.regions.begin(),
                             std::lower_bound(out.regions.begin(), out.regions.end(),
                                              meta.region[node]));
    };

    const int sweeps = trace.size();
    const int n_regions = static_cast<int>(out.regions.size());
    out.edges_by_region = Eigen::MatrixXd::Zero(sweeps, n_regions);
    out.asymmetric_by_region = Eigen::MatrixXd::Zero(sweeps, n_regions);
    out.total_edges = Eigen::VectorXd::Zero(sweeps);
    out.total_asymmetric = Eigen::VectorXd::Zero(sweeps);

    for (int s = 0; s < sweeps; ++s) {
        const std::set<Edge> edges(trace.graphs[s].begin(), trace.graphs[s].end());
        out.total_edges(s) = double(edges.size());
        for (const auto& e : edges) {
            // an edge contributes to both endpoints' regional counts
            out.edges_by_region(s, region_index(e.a)) += 1.0;
            if (region_index(e.b) != region_index(e.a))
                out.edges_by_region(s, region_index(e.b)) += 1.0;

            if (meta.mirror.empty()) continue;
            const int ma = meta.mirror[e.a];
            const int mb = meta.mirror[e.b];
            if (ma < 0 || mb < 0) continue;
            const Edge mirrored(ma, mb);
            if (mirrored.a == mirrored.b) continue;
            if (!edges.count(mirrored)) {
                out.total_asymmetric(s) += 1.0;
                out.asymmetric_by_region(s, region_index(e.a)) += 1.0;
                if (region_index(e.b) != region_index(e.a))
                    out.asymmetric_by_region(s, region_index(e.b)) += 1.0;
            }
        }
    }
    return out;
}

GroupComparison compare_groups(const Eigen::VectorXd& stat_a, const Eigen::VectorXd& stat_b) {
    if (stat_a.size() == 0 || stat_b.size() == 0) throw EmptyTraceError("empty statistic vector");
    const auto n = std::max(stat_a.size(), stat_b.size());
    GroupComparison out;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = stat_a(i % stat_a.size());
        const double b = stat_b(i % stat_b.size());
        if (a > b)
            out.prob_greater += 1.0;
        else if (a < b)
            out.prob_less += 1.0;
        else
            out.prob_equal += 1.0;
    }
    out.prob_greater /= double(n);
    out.prob_equal /= double(n);
    out.prob_less /= double(n);
    return out;
}

}  // namespace fgm
