#include "fgm/sampler.hpp"

#include <cmath>

namespace fgm {

void McmcConfig::validate() const {
    if (iterations <= 0 || burn_in < 0 || burn_in >= iterations)
        throw DomainError("require 0 <= burn_in < iterations");
    if (global_prob < 0.0 || global_prob > 1.0) throw DomainError("q must lie in [0,1]");
    if (chains < 1) throw DomainError("chains must be >= 1");
    if (thin_draws < 1) throw DomainError("thin_draws must be >= 1");
}

NoiseModel NoiseModel::from_node_variances(const std::vector<double>& s2,
                                           const BlockLayout& layout) {
    if (static_cast<int>(s2.size()) != layout.node_count())
        throw DimensionMismatchError("one noise variance per node required");
    Eigen::VectorXd diag(layout.total);
    for (int j = 0; j < layout.node_count(); ++j) {
        if (!(s2[j] > 0.0)) throw DomainError("noise variances must be positive");
        for (int k = 0; k < layout.truncations[j]; ++k) diag(layout.offsets[j] + k) = s2[j];
    }
    return NoiseModel{std::move(diag)};
}

bool mh_accept(double log_post_prop, double log_post_cur, double log_proposal_ratio,
               Rng& rng) {
    const double log_alpha = log_post_prop - log_post_cur + log_proposal_ratio;
    if (log_alpha >= 0.0) return true;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return std::log(unif(rng)) < log_alpha;
}

namespace {

struct MoveClasses {
    std::vector<EdgeMove> adds;
    std::vector<EdgeMove> deletes;
};

MoveClasses split_moves(const DecomposableGraph& g) {
    MoveClasses mc;
    for (auto& m : g.legal_moves()) {
        (m.kind == EdgeMove::Kind::Add ? mc.adds : mc.deletes).push_back(m);
    }
    return mc;
}

// log P(propose this move | graph) for the local add/delete mixture; a move
// class that is empty redirects its probability mass to the other class
double log_local_proposal_prob(const MoveClasses& mc, EdgeMove::Kind kind) {
    const bool both = !mc.adds.empty() && !mc.deletes.empty();
    const double class_weight = both ? 0.5 : 1.0;
    const auto& cls = (kind == EdgeMove::Kind::Add) ? mc.adds : mc.deletes;
    return std::log(class_weight) - std::log(static_cast<double>(cls.size()));
}

// one small-world MH step; returns the (possibly unchanged) graph and whether
// the proposal was accepted, updating the tracked log marginal likelihood
struct GraphStepState {
    DecomposableGraph graph;
    double log_ml = 0.0;
};

bool graph_mh_step(GraphStepState& st, const CoefficientDataset& data,
                   const HiwParams& params, const McmcConfig& config,
                   const std::vector<DecomposableGraph>* global_pool, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    if (global_pool && unif(rng) < config.global_prob) {
        std::uniform_int_distribution<std::size_t> pick(0, global_pool->size() - 1);
        const DecomposableGraph& prop = (*global_pool)[pick(rng)];
        const double prop_ml = log_marginal_likelihood(data, params, prop);
        const double log_prior_diff =
            log_graph_prior(config.prior, prop) - log_graph_prior(config.prior, st.graph);
        if (mh_accept(prop_ml + log_prior_diff, st.log_ml, 0.0, rng)) {
            st.graph = prop;
            st.log_ml = prop_ml;
            return true;
        }
        return false;
    }

    EdgeMove move;
    DecomposableGraph proposed;
    double log_prop_ratio;

    if (config.simplified_proposal_ratio) {
        // cheap variant: draw a uniform pair of the chosen class and reject
        // outright if the toggle breaks decomposability; the proposal ratio
        // reduces to the closed-form edge-count expression
        const int p = st.graph.node_count();
        const int n_pairs = p * (p - 1) / 2;
        const int n_e = st.graph.edge_count();
        const bool add = unif(rng) < 0.5;
        if (add && n_e == n_pairs) return false;
        if (!add && n_e == 0) return false;

        std::uniform_int_distribution<int> node(0, p - 1);
        int i = 0, j = 0;
        do {
            i = node(rng);
            j = node(rng);
        } while (i == j || st.graph.has_edge(i, j) == add);
        move.pair = Edge(i, j);
        move.kind = add ? EdgeMove::Kind::Add : EdgeMove::Kind::Delete;
        try {
            proposed = st.graph.with_toggled(move.pair);
        } catch (const NonChordalError&) {
            return false;
        }
        log_prop_ratio = add ? std::log(double(n_pairs - n_e)) - std::log(double(n_e + 1))
                             : std::log(double(n_e)) - std::log(double(n_pairs - n_e + 1));
    } else {
        const MoveClasses mc = split_moves(st.graph);
        auto kind = (unif(rng) < 0.5) ? EdgeMove::Kind::Add : EdgeMove::Kind::Delete;
        if (kind == EdgeMove::Kind::Add && mc.adds.empty()) kind = EdgeMove::Kind::Delete;
        if (kind == EdgeMove::Kind::Delete && mc.deletes.empty()) kind = EdgeMove::Kind::Add;

        const auto& cls = (kind == EdgeMove::Kind::Add) ? mc.adds : mc.deletes;
        std::uniform_int_distribution<std::size_t> pick(0, cls.size() - 1);
        move = cls[pick(rng)];
        proposed = st.graph.with_toggled(move.pair);

        const MoveClasses mc_rev = split_moves(proposed);
        const auto rev_kind = (move.kind == EdgeMove::Kind::Add) ? EdgeMove::Kind::Delete
                                                                 : EdgeMove::Kind::Add;
        log_prop_ratio = log_local_proposal_prob(mc_rev, rev_kind) -
                         log_local_proposal_prob(mc, move.kind);
    }

    const double log_lik_ratio = log_ratio_edge_move(data, params, st.graph, move);
    const double sign = (move.kind == EdgeMove::Kind::Add) ? 1.0 : -1.0;
    const double log_prior_ratio = sign * log_prior_ratio_add(config.prior);

    if (mh_accept(log_lik_ratio + log_prior_ratio, 0.0, log_prop_ratio, rng)) {
        st.graph = std::move(proposed);
        st.log_ml += log_lik_ratio;
        return true;
    }
    return false;
}

std::optional<std::vector<DecomposableGraph>> make_global_pool(int p,
                                                               const McmcConfig& config) {
    if (config.global_prob <= 0.0) return std::nullopt;
    if (p > config.p_enum_max)
        throw TooLargeError("global proposals require p <= p_enum_max");
    return enumerate_decomposable(p, config.p_enum_max);
}

}  // namespace

ChainTrace run_algorithm1(const CoefficientDataset& data, const HiwParams& params,
                          const McmcConfig& config, const DecomposableGraph& initial) {
    config.validate();
    if (data.layout.node_count() != initial.node_count())
        throw DimensionMismatchError("dataset layout and initial graph disagree");
    const auto pool = make_global_pool(initial.node_count(), config);

    Rng rng(config.seed);
    GraphStepState st{initial, log_marginal_likelihood(data, params, initial)};

    ChainTrace trace;
    trace.seed = config.seed;
    trace.p = initial.node_count();
    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        const bool accepted =
            graph_mh_step(st, data, params, config, pool ? &*pool : nullptr, rng);
        if (sweep >= config.burn_in) {
            trace.graphs.push_back(st.graph.edges());
            trace.log_posts.push_back(st.log_ml + log_graph_prior(config.prior, st.graph));
            trace.accepts.push_back(accepted ? 1 : 0);
        }
    }
    return trace;
}

Eigen::VectorXd step3_sample_coeffs(const Eigen::VectorXd& d, const Eigen::VectorXd& c0,
                                    const CovarianceDraw& q, const NoiseModel& noise,
                                    Rng& rng) {
    const auto dim = d.size();
    Eigen::LLT<Eigen::MatrixXd> llt_q(q.matrix);
    if (llt_q.info() != Eigen::Success) throw NotSpdError("Q not SPD");
    const Eigen::MatrixXd q_inv = llt_q.solve(Eigen::MatrixXd::Identity(dim, dim));
    const Eigen::VectorXd lambda_inv = noise.lambda_diag.cwiseInverse();

    Eigen::MatrixXd v_inv = q_inv;
    v_inv.diagonal() += lambda_inv;
    Eigen::LLT<Eigen::MatrixXd> llt_v(v_inv);
    if (llt_v.info() != Eigen::Success) throw NotSpdError("posterior precision not SPD");

    const Eigen::VectorXd mu = llt_v.solve(lambda_inv.cwiseProduct(d) + q_inv * c0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(dim);
    for (Eigen::Index i = 0; i < dim; ++i) z(i) = normal(rng);
    // chol(V) z == L^{-T} z for V = (L L^T)^{-1}
    return mu + llt_v.matrixL().transpose().solve(z);
}

ChainTrace run_algorithm2(const CoefficientDataset& noisy, const HiwParams& params,
                          const NoiseModel& noise, const McmcConfig& config,
                          const DecomposableGraph& initial) {
    config.validate();
    if (noise.lambda_diag.size() != noisy.dim())
        throw DimensionMismatchError("noise dimension does not match data");
    if ((noise.lambda_diag.array() <= 0.0).any())
        throw DomainError("noise variances must be positive");
    const auto pool = make_global_pool(initial.node_count(), config);

    Rng rng(config.seed);
    const Eigen::VectorXd lambda_inv = noise.lambda_diag.cwiseInverse();
    Eigen::MatrixXd coeffs = noisy.samples;  // initialize latent c_i at d_i

    ChainTrace trace;
    trace.seed = config.seed;
    trace.p = initial.node_count();

    CoefficientDataset current(coeffs, noisy.mean, noisy.layout);
    GraphStepState st{initial, log_marginal_likelihood(current, params, initial)};
    std::normal_distribution<double> normal(0.0, 1.0);

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        // (1) graph update given the current latent coefficients
        const bool accepted =
            graph_mh_step(st, current, params, config, pool ? &*pool : nullptr, rng);

        // (2) covariance from the conjugate HIW posterior
        const HiwParams post =
            hiw_posterior_update_scatter(params, current.n(), current.scatter());
        const CovarianceDraw q = sample_hiw_completed(post, noisy.layout, st.graph, rng);

        // (3) latent coefficients; V's Cholesky shared across samples
        const auto dim = noisy.dim();
        Eigen::LLT<Eigen::MatrixXd> llt_q(q.matrix);
        if (llt_q.info() != Eigen::Success) throw NotSpdError("Q draw not SPD");
        const Eigen::MatrixXd q_inv = llt_q.solve(Eigen::MatrixXd::Identity(dim, dim));
        Eigen::MatrixXd v_inv = q_inv;
        v_inv.diagonal() += lambda_inv;
        Eigen::LLT<Eigen::MatrixXd> llt_v(v_inv);
        if (llt_v.info() != Eigen::Success) throw NotSpdError("posterior precision not SPD");
        const Eigen::VectorXd prior_pull = q_inv * noisy.mean;
        for (int i = 0; i < noisy.n(); ++i) {
            const Eigen::VectorXd rhs =
                lambda_inv.cwiseProduct(noisy.samples.row(i).transpose()) + prior_pull;
            const Eigen::VectorXd mu = llt_v.solve(rhs);
            Eigen::VectorXd z(dim);
            for (Eigen::Index k = 0; k < dim; ++k) z(k) = normal(rng);
            coeffs.row(i) = (mu + llt_v.matrixL().transpose().solve(z)).transpose();
        }
        current = CoefficientDataset(coeffs, noisy.mean, noisy.layout);
        st.log_ml = log_marginal_likelihood(current, params, st.graph);

        if (sweep >= config.burn_in) {
            trace.graphs.push_back(st.graph.edges());
            trace.log_posts.push_back(st.log_ml + log_graph_prior(config.prior, st.graph));
            trace.accepts.push_back(accepted ? 1 : 0);
            if ((sweep - config.burn_in) % config.thin_draws == 0) {
                trace.thinned_sweeps.push_back(sweep);
                trace.q_draws.push_back(q.matrix);
                trace.coeff_draws.push_back(coeffs);
            }
        }
    }
    return trace;
}

}  // namespace fgm
