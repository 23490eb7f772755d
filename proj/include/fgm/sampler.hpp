#pragma once

#include <cstdint>
#include <optional>

#include "fgm/likelihood.hpp"

namespace fgm {

struct McmcConfig {
    int iterations = 5000;
    int burn_in = 1000;
    double global_prob = 0.0;  // q: small-world mixture weight
    GraphPrior prior = GraphPrior::uniform();
    std::uint64_t seed = 0;
    int chains = 1;
    int p_enum_max = 6;  // bound for the global uniform proposal
    bool simplified_proposal_ratio = false;  // (p(p-1)/2 - n_e)/(n_e + 1) form
    int thin_draws = 10;  // Algorithm 2: keep every k-th Q / coefficient draw

    void validate() const;
};

/// Block-constant diagonal noise covariance: s_j^2 repeated M_j times.
struct NoiseModel {
    Eigen::VectorXd lambda_diag;  // length D, entries > 0

    static NoiseModel from_node_variances(const std::vector<double>& s2,
                                          const BlockLayout& layout);
};

struct ChainTrace {
    std::vector<std::vector<Edge>> graphs;  // post-burn-in edge sets
    std::vector<double> log_posts;          // log posterior up to a constant
    std::vector<char> accepts;
    std::uint64_t seed = 0;
    int p = 0;

    // Algorithm 2 extras, thinned
    std::vector<int> thinned_sweeps;
    std::vector<Eigen::MatrixXd> q_draws;
    std::vector<Eigen::MatrixXd> coeff_draws;  // n x D snapshots

    int size() const { return static_cast<int>(graphs.size()); }
};

/// Accept with probability min{1, exp(lp_prop - lp_cur + log_proposal_ratio)}.
bool mh_accept(double log_post_prop, double log_post_cur, double log_proposal_ratio,
               Rng& rng);

/// Small-world Metropolis-Hastings over decomposable graphs for smooth data.
ChainTrace run_algorithm1(const CoefficientDataset& data, const HiwParams& params,
                          const McmcConfig& config, const DecomposableGraph& initial);

/// Gibbs sampler for noisy data: graph MH step, HIW covariance update, and
/// latent coefficient refresh per sweep.
ChainTrace run_algorithm2(const CoefficientDataset& noisy, const HiwParams& params,
                          const NoiseModel& noise, const McmcConfig& config,
                          const DecomposableGraph& initial);

/// Latent coefficient draw: V = (Lambda^{-1} + Q^{-1})^{-1},
/// mu = V (Lambda^{-1} d + Q^{-1} c0), returns mu + chol(V) z.
Eigen::VectorXd step3_sample_coeffs(const Eigen::VectorXd& d, const Eigen::VectorXd& c0,
                                    const CovarianceDraw& q, const NoiseModel& noise,
                                    Rng& rng);

}  // namespace fgm
