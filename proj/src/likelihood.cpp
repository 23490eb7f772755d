#include "fgm/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fgm {

CoefficientDataset::CoefficientDataset(Eigen::MatrixXd samples_, Eigen::VectorXd mean_,
                                       BlockLayout layout_)
    : samples(std::move(samples_)), mean(std::move(mean_)), layout(std::move(layout_)) {
    if (samples.cols() != layout.total || mean.size() != layout.total)
        throw DimensionMismatchError("dataset dimension does not match layout");
    if (!samples.allFinite() || !mean.allFinite())
        throw DimensionMismatchError("dataset contains non-finite values");
    const Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
    scatter_ = centered.transpose() * centered;
}

GraphPrior GraphPrior::bernoulli(double r) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("edge probability must lie in (0,1)");
    return {Kind::BernoulliEdges, r};
}

GraphPrior GraphPrior::default_bernoulli(int p) {
    const double r = (p > 1) ? 2.0 / (p - 1) : 0.5;
    return bernoulli(std::clamp(r, 1e-6, 1.0 - 1e-6));
}

namespace {

double log_normal_block(const Eigen::VectorXd& x, const Eigen::VectorXd& mu,
                        const Eigen::MatrixXd& cov) {
    const auto d = x.size();
    if (d == 0) return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NotSpdError("covariance block not SPD");
    const Eigen::VectorXd z = llt.matrixL().solve(x - mu);
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * (d * std::log(2.0 * std::numbers::pi) + logdet + z.squaredNorm());
}

// ((delta + d_A - 1)/2) log|U_A| - log Gamma_{d_A}((delta + d_A - 1)/2);
// the 1/2 scale factors cancel across the full move ratio
double ratio_term(int delta, const Eigen::MatrixXd& block) {
    const int d = static_cast<int>(block.rows());
    if (d == 0) return 0.0;
    const double a = 0.5 * (delta + d - 1);
    return a * log_det_spd(block) - log_multigamma(d, a);
}

double ratio_half(int delta, const Eigen::MatrixXd& scale, const BlockLayout& layout,
                  const std::vector<int>& cq, const std::vector<int>& sq,
                  const std::vector<int>& cq1, const std::vector<int>& cq2) {
    auto block = [&](const std::vector<int>& nodes) {
        const auto idx = layout.indices(nodes);
        return submatrix(scale, idx, idx);
    };
    return ratio_term(delta, block(cq)) + ratio_term(delta, block(sq)) -
           ratio_term(delta, block(cq1)) - ratio_term(delta, block(cq2));
}

double log_ratio_add(const CoefficientDataset& data, const HiwParams& params,
                     const DecomposableGraph& graph, const Edge& e) {
    if (graph.has_edge(e.a, e.b)) throw IllegalMoveError("edge already present");
    DecomposableGraph proposed;
    try {
        proposed = graph.with_toggled(e);
    } catch (const NonChordalError&) {
        throw IllegalMoveError("adding this edge breaks decomposability");
    }

    // the unique clique of the proposed graph containing both endpoints
    const std::vector<int>* cq = nullptr;
    for (const auto& c : proposed.junction().cliques) {
        if (std::binary_search(c.begin(), c.end(), e.a) &&
            std::binary_search(c.begin(), c.end(), e.b)) {
            if (cq) throw IllegalMoveError("endpoints shared by multiple cliques");
            cq = &c;
        }
    }
    if (!cq) throw IllegalMoveError("no clique contains both endpoints");

    std::vector<int> sq, cq1, cq2;
    for (int v : *cq) {
        if (v != e.a && v != e.b) sq.push_back(v);
        if (v != e.a) cq1.push_back(v);
        if (v != e.b) cq2.push_back(v);
    }

    const HiwParams post = hiw_posterior_update_scatter(params, data.n(), data.scatter());
    return ratio_half(params.delta, params.scale, data.layout, *cq, sq, cq1, cq2) -
           ratio_half(post.delta, post.scale, data.layout, *cq, sq, cq1, cq2);
}

}  // namespace

double log_markov_density(const Eigen::VectorXd& c, const Eigen::VectorXd& c0,
                          const CovarianceDraw& q, const BlockLayout& layout) {
    if (c.size() != layout.total || c0.size() != layout.total ||
        q.matrix.rows() != layout.total)
        throw DimensionMismatchError("dimension mismatch in Markov density");
    auto sub_vec = [&](const Eigen::VectorXd& v, const std::vector<int>& idx) {
        Eigen::VectorXd out(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
        return out;
    };
    double out = 0.0;
    const auto& js = q.graph.junction();
    for (const auto& cl : js.cliques) {
        const auto idx = layout.indices(cl);
        out += log_normal_block(sub_vec(c, idx), sub_vec(c0, idx),
                                submatrix(q.matrix, idx, idx));
    }
    for (const auto& s : js.separators) {
        const auto idx = layout.indices(s);
        out -= log_normal_block(sub_vec(c, idx), sub_vec(c0, idx),
                                submatrix(q.matrix, idx, idx));
    }
    return out;
}

double log_marginal_likelihood(const CoefficientDataset& data, const HiwParams& params,
                               const DecomposableGraph& graph) {
    if (data.dim() != params.scale.rows())
        throw DimensionMismatchError("dataset/scale dimensions differ");
    const HiwParams post = hiw_posterior_update_scatter(params, data.n(), data.scatter());
    const auto& js = graph.junction();
    const double const_term =
        -0.5 * data.n() * data.dim() * std::log(2.0 * std::numbers::pi);
    return const_term + log_h(params, data.layout, js) - log_h(post, data.layout, js);
}

double log_ratio_edge_move(const CoefficientDataset& data, const HiwParams& params,
                           const DecomposableGraph& graph, const EdgeMove& move) {
    if (move.kind == EdgeMove::Kind::Add) {
        return log_ratio_add(data, params, graph, move.pair);
    }
    if (!graph.has_edge(move.pair.a, move.pair.b)) throw IllegalMoveError("edge not present");
    DecomposableGraph reduced;
    try {
        reduced = graph.with_toggled(move.pair);
    } catch (const NonChordalError&) {
        throw IllegalMoveError("deleting this edge breaks decomposability");
    }
    return -log_ratio_add(data, params, reduced, move.pair);
}

double log_graph_prior(const GraphPrior& prior, const DecomposableGraph& graph) {
    if (prior.kind == GraphPrior::Kind::UniformOverDecomposable) return 0.0;
    const int p = graph.node_count();
    const int n_pairs = p * (p - 1) / 2;
    const int n_e = graph.edge_count();
    return n_e * std::log(prior.edge_prob) +
           (n_pairs - n_e) * std::log1p(-prior.edge_prob);
}

double log_prior_ratio_add(const GraphPrior& prior) {
    if (prior.kind == GraphPrior::Kind::UniformOverDecomposable) return 0.0;
    return std::log(prior.edge_prob) - std::log1p(-prior.edge_prob);
}

}  // namespace fgm
