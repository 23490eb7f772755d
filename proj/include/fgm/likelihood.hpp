#pragma once

#include <Eigen/Dense>

#include "fgm/graph.hpp"
#include "fgm/hiw.hpp"

namespace fgm {

struct IllegalMoveError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// n samples of stacked basis-coefficient vectors plus the prior mean.
struct CoefficientDataset {
    Eigen::MatrixXd samples;  // n x D
    Eigen::VectorXd mean;     // c0, length D
    BlockLayout layout;

    CoefficientDataset() = default;
    CoefficientDataset(Eigen::MatrixXd samples_, Eigen::VectorXd mean_, BlockLayout layout_);

    int n() const { return static_cast<int>(samples.rows()); }
    int dim() const { return layout.total; }

    /// Centered scatter matrix sum_i (c_i - c0)(c_i - c0)^T.
    const Eigen::MatrixXd& scatter() const { return scatter_; }

private:
    Eigen::MatrixXd scatter_;
};

struct GraphPrior {
    enum class Kind { UniformOverDecomposable, BernoulliEdges };
    Kind kind = Kind::UniformOverDecomposable;
    double edge_prob = 0.5;  // r, Bernoulli kind only

    static GraphPrior uniform() { return {Kind::UniformOverDecomposable, 0.5}; }
    static GraphPrior bernoulli(double r);
    /// The default sparsity prior r = 2/(p-1), clamped into (0,1).
    static GraphPrior default_bernoulli(int p);
};

/// Clique-factorized Gaussian log density:
/// sum_C log N(c_C | c0_C, Q_C) - sum_S log N(c_S | c0_S, Q_S).
double log_markov_density(const Eigen::VectorXd& c, const Eigen::VectorXd& c0,
                          const CovarianceDraw& q, const BlockLayout& layout);

/// Integrated marginal log likelihood of the dataset given the graph:
/// -(N D / 2) log(2 pi) + log h(delta, U) - log h(delta~, U~).
double log_marginal_likelihood(const CoefficientDataset& data, const HiwParams& params,
                               const DecomposableGraph& graph);

/// Incremental log likelihood ratio log p({c_i} | G~) - log p({c_i} | G) for
/// a single-edge move, via the closed-form clique/separator perturbation.
/// Delete ratios are the negated add ratio on the post-delete graph.
double log_ratio_edge_move(const CoefficientDataset& data, const HiwParams& params,
                           const DecomposableGraph& graph, const EdgeMove& move);

double log_graph_prior(const GraphPrior& prior, const DecomposableGraph& graph);

/// Log prior ratio for one added edge (negate for a delete).
double log_prior_ratio_add(const GraphPrior& prior);

}  // namespace fgm
