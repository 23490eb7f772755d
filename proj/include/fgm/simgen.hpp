#pragma once

#include "fgm/basis.hpp"
#include "fgm/graph.hpp"
#include "fgm/hiw.hpp"

namespace fgm {

/// Configuration for the synthetic-data generators. Defaults reproduce the
/// 6-node smooth-data study shape (n = 200, M_j in 3..7).
struct SimSpec {
    int p = 6;
    int n = 200;
    int grid_points = 128;
    int truncation_min = 3;
    int truncation_max = 7;
    std::vector<int> truncations;  // optional explicit M_j; overrides the range
    double gamma_shape = 2.0;      // eigenvalue law
    double gamma_scale = 1.0;
    double decay_rate = 0.5;       // lambda_k multiplied by exp(-decay (k-1))
    double mean_offset = 14.0;     // common mean curve offset + amp sin(2 pi t)
    double mean_amplitude = 3.0;
    double edge_weight_min = 0.4;  // |R_0^{-1}| off-diagonal magnitudes before scaling
    double edge_weight_max = 0.6;
    std::uint64_t seed = 0;
    std::vector<Edge> true_edges;  // ground-truth graph on p nodes
};

struct SimTruth {
    DecomposableGraph graph;
    BlockLayout layout;
    Eigen::MatrixXd covariance;     // completed Q with exact precision zeros
    Eigen::MatrixXd scores;         // n x D generating coefficients
    Eigen::MatrixXd base_corr;      // R_0
    std::vector<Eigen::VectorXd> eigenvalues;  // per node
};

struct SimOutput {
    FunctionalDataset data;
    SimTruth truth;
};

/// Correlation matrix whose inverse has exact zeros at the non-edges of
/// `graph`. The inverse is built as I + sB, where B carries signed random
/// edge weights and s scales each connected component up to an eigenvalue
/// floor, keeping the implied partial correlations strong.
Eigen::MatrixXd make_base_correlation(const DecomposableGraph& graph, double wmin,
                                      double wmax, Rng& rng);

/// Smooth multivariate functional data: gamma-law eigenvalues with
/// exponential decay, block correlation R_ij = (R_0)_ij I, scores from the
/// Markov completion of Z R Z, curves synthesized on the Fourier basis.
SimOutput gen_smooth_dataset(const SimSpec& spec, Rng& rng);

/// Adds white noise per grid point with per-curve variance drawn from a
/// gamma law parameterized by mean and variance.
FunctionalDataset add_noise(const FunctionalDataset& data, double gamma_mean,
                            double gamma_var, Rng& rng);

struct TrueGraphCatalog {
    DecomposableGraph six_node;   // 7 edges, connected, decomposable
    DecomposableGraph sixty_node; // 42 singletons, 18 connected nodes, 57 edges
};

TrueGraphCatalog default_true_graphs();

}  // namespace fgm
