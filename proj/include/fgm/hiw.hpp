#pragma once

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <vector>

#include "fgm/graph.hpp"

namespace fgm {

using Rng = std::mt19937_64;

struct NotSpdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct DimensionMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Maps node j to a contiguous block of coefficient indices of length M_j.
struct BlockLayout {
    std::vector<int> truncations;  // M_1..M_p, each >= 1
    std::vector<int> offsets;      // start index per node
    int total = 0;                 // D = sum M_j

    BlockLayout() = default;
    explicit BlockLayout(std::vector<int> m);

    int node_count() const { return static_cast<int>(truncations.size()); }

    /// Concatenated coefficient indices of a node set (ascending node order).
    std::vector<int> indices(const std::vector<int>& nodes) const;

    /// Block dimension of a node set: sum of its truncations.
    int dim(const std::vector<int>& nodes) const;
};

/// Degrees of freedom and scale matrix of the hyper-inverse-Wishart prior.
/// Only clique blocks of `scale` are ever consumed.
struct HiwParams {
    int delta = 1;          // >= 1
    Eigen::MatrixXd scale;  // D x D, symmetric, SPD on clique blocks

    HiwParams() = default;
    HiwParams(int delta_, Eigen::MatrixXd scale_);
};

struct CovarianceDraw {
    Eigen::MatrixXd matrix;  // D x D SPD, Markov w.r.t. `graph`
    DecomposableGraph graph;
};

/// log Gamma_b(a) = (b(b-1)/4) log pi + sum_{i=0}^{b-1} log Gamma(a - i/2).
/// b = 0 gives 0 (empty product). Throws DomainError at or past a pole.
double log_multigamma(int b, double a);

/// Cholesky log-determinant; throws NotSpdError if the factorization fails.
double log_det_spd(const Eigen::MatrixXd& m);

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols);

/// Draw Sigma ~ IW(delta, U) in the Dawid parameterization: Sigma^{-1} ~
/// Wishart(delta + d - 1, U^{-1}), via Bartlett decomposition.
Eigen::MatrixXd sample_iw_dawid(int delta, const Eigen::MatrixXd& scale, Rng& rng);

/// Wishart draw W ~ W(df, V) via Bartlett (test and sampling primitive).
Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng);

/// Clique-factorized log normalizer:
///   log h = sum_C [ ((delta+d_c-1)/2) logdet(U_C/2) - log Gamma_{d_c}((delta+d_c-1)/2) ]
///         - sum_S [ same over separators ].
double log_h(const HiwParams& params, const BlockLayout& layout,
             const JunctionSequence& junction);

/// Conjugate update: delta += n, scale += sum_i (c_i - c0)(c_i - c0)^T.
/// `samples` is n x D, one sample per row.
HiwParams hiw_posterior_update(const HiwParams& params, const Eigen::VectorXd& c0,
                               const Eigen::MatrixXd& samples);

/// Same update when the centered scatter matrix is already available.
HiwParams hiw_posterior_update_scatter(const HiwParams& params, int n,
                                       const Eigen::MatrixXd& scatter);

/// Sample Q ~ HIW(delta, U) restricted to `graph`: sequential clique-marginal
/// draws along the perfect ordering, then Markov completion so that Q^{-1}
/// has exact zeros at all non-adjacent blocks.
CovarianceDraw sample_hiw_completed(const HiwParams& params, const BlockLayout& layout,
                                    const DecomposableGraph& graph, Rng& rng);

/// Markov completion: assembles the unique covariance whose precision is
/// K = sum_C [(Q_C)^{-1}]^0 - sum_S [(Q_S)^{-1}]^0 from per-clique blocks of
/// `dense` (zero-padded embeddings).
Eigen::MatrixXd markov_complete(const Eigen::MatrixXd& dense, const BlockLayout& layout,
                                const DecomposableGraph& graph);

}  // namespace fgm
