#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fgm/hiw.hpp"

namespace fgm {

struct TooFewSamplesError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateGridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct AllZeroError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Gridded multivariate functional observations: one dense common grid per
/// node, n curves per node.
struct FunctionalDataset {
    std::vector<Eigen::VectorXd> grids;   // per node, strictly increasing
    std::vector<Eigen::MatrixXd> values;  // per node, n x m_j

    int node_count() const { return static_cast<int>(grids.size()); }
    int sample_count() const { return values.empty() ? 0 : static_cast<int>(values[0].rows()); }
    void validate() const;
};

/// Per-node basis functions evaluated on the grid, orthonormal under
/// trapezoidal quadrature.
struct BasisSystem {
    enum class Kind { Eigenbasis, Fourier };
    Kind kind = Kind::Eigenbasis;
    std::vector<Eigen::MatrixXd> functions;    // per node, m_j x K_j columns
    std::vector<Eigen::VectorXd> eigenvalues;  // eigenbasis only, nonincreasing
    std::vector<Eigen::VectorXd> means;        // per node mean curve
};

struct FpcaResult {
    BasisSystem system;
    std::vector<Eigen::MatrixXd> scores;  // per node, n x K_j
};

/// Trapezoidal quadrature weights for a strictly increasing grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid);

/// Dense-grid functional principal component analysis per node: pointwise
/// mean, sample covariance on the grid, quadrature-corrected
/// eigendecomposition, and scores by trapezoidal inner products.
FpcaResult fpca(const FunctionalDataset& data);

/// FPCA with white-noise correction: `noise_s2` holds per-node noise
/// variances on the coefficient scale (as returned by
/// estimate_noise_variance); the implied ridge is removed from the
/// covariance diagonal before the eigendecomposition so noise does not
/// inflate the spectrum or the variance-fraction truncation.
FpcaResult fpca(const FunctionalDataset& data, const std::vector<double>& noise_s2);

/// Orthonormal Fourier system on [grid.min, grid.max]: constant, then
/// sin/cos pairs at increasing frequency.
Eigen::MatrixXd fourier_basis(const Eigen::VectorXd& grid, int n_funcs);

/// Projection scores of centered curves on the first M_j Fourier functions.
std::vector<Eigen::MatrixXd> project_fourier(const FunctionalDataset& data,
                                             const std::vector<int>& truncations,
                                             bool center = true);

/// Smallest M with cumulative eigenvalue share >= threshold.
int fve_truncate(const Eigen::VectorXd& eigenvalues, double threshold);

/// Per-node noise variance s_j^2 = sigma_hat_j^2 |T_j| / (m_j - 1), with
/// sigma_hat_j^2 the mean squared residual after local linear smoothing
/// (bandwidth 0.1 |T_j|).
std::vector<double> estimate_noise_variance(const FunctionalDataset& data);

/// Local linear smooth of one curve (exposed for tests).
Eigen::VectorXd local_linear_smooth(const Eigen::VectorXd& grid, const Eigen::VectorXd& y,
                                    double bandwidth);

}  // namespace fgm
