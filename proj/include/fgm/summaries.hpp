#pragma once

#include <map>
#include <string>

#include "fgm/sampler.hpp"

namespace fgm {

struct EmptyTraceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct MissingMetadataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Per-node region label plus optional left/right mirror pairing.
struct NodeMetadata {
    std::vector<std::string> region;  // length p
    std::vector<int> mirror;          // counterpart index or -1; an involution

    void validate(int p) const;
};

/// Symmetric p x p matrix of marginal edge-inclusion probabilities.
using EdgeProbMatrix = Eigen::MatrixXd;

struct AccuracyStats {
    double mis_rate = 0.0;     // mean fraction of disagreeing pairs
    double sensitivity = 0.0;  // mean fraction of true edges present
    double specificity = 0.0;  // mean fraction of true non-edges absent
    double mean_edges = 0.0;
};

EdgeProbMatrix inclusion_probs(const ChainTrace& trace);

AccuracyStats accuracy_stats(const ChainTrace& trace, const DecomposableGraph& truth);

/// Edges with inclusion probability > tau. The result is a summary and need
/// not be decomposable.
std::vector<Edge> threshold_graph(const EdgeProbMatrix& probs, double tau);

struct RegionStats {
    std::vector<std::string> regions;  // distinct labels, sorted
    Eigen::MatrixXd edges_by_region;      // sweeps x regions, per-endpoint counts
    Eigen::VectorXd total_edges;          // per sweep
    Eigen::MatrixXd asymmetric_by_region; // sweeps x regions
    Eigen::VectorXd total_asymmetric;     // per sweep
};

RegionStats region_asymmetry_stats(const ChainTrace& trace, const NodeMetadata& meta);

struct GroupComparison {
    double prob_greater = 0.0;
    double prob_equal = 0.0;
    double prob_less = 0.0;
};

/// P(stat_A > stat_B), P(=), P(<) by pairing draw i of A with draw i of B
/// (cycling over the shorter sequence).
GroupComparison compare_groups(const Eigen::VectorXd& stat_a, const Eigen::VectorXd& stat_b);

}  // namespace fgm
