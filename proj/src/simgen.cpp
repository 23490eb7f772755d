#include "fgm/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fgm {

Eigen::MatrixXd make_base_correlation(const DecomposableGraph& graph, double wmin,
                                      double wmax, Rng& rng) {
    const int p = graph.node_count();
    std::uniform_real_distribution<double> mag(wmin, wmax);
    std::bernoulli_distribution flip(0.5);

    // per-node signs keep the sign pattern coherent across cycles: the
    // matrix is a signature similarity of its all-positive counterpart, so
    // frustration never forces the spectrum (and hence the rescaling below)
    // to wash the partial correlations out
    std::vector<double> node_sign(p);
    for (auto& s : node_sign) s = flip(rng) ? 1.0 : -1.0;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
    for (const auto& e : graph.edges()) {
        const double w = -mag(rng) * node_sign[e.a] * node_sign[e.b];
        b(e.a, e.b) = b(e.b, e.a) = w;
    }
    // scale the off-diagonal pattern only as far as positive definiteness
    // requires; an eigenvalue floor keeps the partial correlations strong.
    // scaling is applied per connected component so a dense component does
    // not dilute the couplings of the sparse ones
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(p, p);
    for (const auto& comp : graph.connected_components()) {
        if (comp.size() < 2) continue;
        const int c = static_cast<int>(comp.size());
        Eigen::MatrixXd sub(c, c);
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < c; ++j) sub(i, j) = b(comp[i], comp[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
        const double lmin = es.eigenvalues().minCoeff();
        const double scale = (lmin < -0.9) ? 0.9 / -lmin : 1.0;
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < c; ++j)
                if (i != j) k(comp[i], comp[j]) = scale * sub(i, j);
    }

    const Eigen::MatrixXd kinv = k.llt().solve(Eigen::MatrixXd::Identity(p, p));
    const Eigen::VectorXd d = kinv.diagonal().array().rsqrt();
    return d.asDiagonal() * kinv * d.asDiagonal();
}

SimOutput gen_smooth_dataset(const SimSpec& spec, Rng& rng) {
    if (spec.p < 1 || spec.n < 1) throw DomainError("spec requires p >= 1, n >= 1");
    DecomposableGraph graph(spec.p, spec.true_edges);

    std::vector<int> m = spec.truncations;
    if (m.empty()) {
        std::uniform_int_distribution<int> pick(spec.truncation_min, spec.truncation_max);
        for (int j = 0; j < spec.p; ++j) m.push_back(pick(rng));
    }
    if (static_cast<int>(m.size()) != spec.p)
        throw DimensionMismatchError("one truncation per node required");
    BlockLayout layout(m);
    const int max_m = *std::max_element(m.begin(), m.end());

    // eigenvalues: gamma law with exponential decay, sorted within node
    std::gamma_distribution<double> gamma(spec.gamma_shape, spec.gamma_scale);
    std::vector<Eigen::VectorXd> eigenvalues;
    Eigen::VectorXd z_diag(layout.total);
    for (int j = 0; j < spec.p; ++j) {
        Eigen::VectorXd lam(m[j]);
        for (int k = 0; k < m[j]; ++k)
            lam(k) = gamma(rng) * std::exp(-spec.decay_rate * k);
        std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
        for (int k = 0; k < m[j]; ++k) z_diag(layout.offsets[j] + k) = std::sqrt(lam(k));
        eigenvalues.push_back(lam);
    }

    const Eigen::MatrixXd r0 = make_base_correlation(graph, spec.edge_weight_min,
                                                     spec.edge_weight_max, rng);

    // block correlation R_ij = (R_0)_ij * rectangular identity
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(layout.total, layout.total);
    for (int i = 0; i < spec.p; ++i) {
        for (int j = 0; j < spec.p; ++j) {
            const int common = std::min(m[i], m[j]);
            for (int k = 0; k < common; ++k)
                r(layout.offsets[i] + k, layout.offsets[j] + k) = r0(i, j);
        }
    }
    const Eigen::MatrixXd q_raw = z_diag.asDiagonal() * r * z_diag.asDiagonal();
    // completion against the truth enforces exact precision zeros at
    // non-edges even when the M_j differ
    const Eigen::MatrixXd q = markov_complete(q_raw, layout, graph);

    // scores ~ N(0, Q)
    Eigen::LLT<Eigen::MatrixXd> llt(q);
    if (llt.info() != Eigen::Success) throw NotSpdError("generated covariance not SPD");
    const Eigen::MatrixXd chol = llt.matrixL();
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd scores(spec.n, layout.total);
    Eigen::VectorXd zvec(layout.total);
    for (int i = 0; i < spec.n; ++i) {
        for (int k = 0; k < layout.total; ++k) zvec(k) = normal(rng);
        scores.row(i) = (chol * zvec).transpose();
    }

    // synthesize curves: common mean plus Fourier combination (constant
    // function excluded so the basis does not confound the mean)
    Eigen::VectorXd grid(spec.grid_points);
    for (int t = 0; t < spec.grid_points; ++t)
        grid(t) = double(t) / double(spec.grid_points - 1);
    const Eigen::MatrixXd fourier = fourier_basis(grid, max_m + 1);
    Eigen::VectorXd mean_curve(spec.grid_points);
    for (int t = 0; t < spec.grid_points; ++t)
        mean_curve(t) = spec.mean_offset +
                        spec.mean_amplitude * std::sin(2.0 * std::numbers::pi * grid(t));

    FunctionalDataset data;
    for (int j = 0; j < spec.p; ++j) {
        data.grids.push_back(grid);
        const Eigen::MatrixXd phi = fourier.middleCols(1, m[j]);
        const Eigen::MatrixXd block = scores.middleCols(layout.offsets[j], m[j]);
        Eigen::MatrixXd vals = block * phi.transpose();
        vals.rowwise() += mean_curve.transpose();
        data.values.push_back(std::move(vals));
    }

    return SimOutput{std::move(data),
                     SimTruth{std::move(graph), std::move(layout), q, std::move(scores), r0,
                              std::move(eigenvalues)}};
}

FunctionalDataset add_noise(const FunctionalDataset& data, double gamma_mean,
                            double gamma_var, Rng& rng) {
    if (!(gamma_mean > 0.0) || gamma_var < 0.0)
        throw DomainError("noise gamma parameters must be positive");
    FunctionalDataset out = data;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& vals : out.values) {
        for (Eigen::Index i = 0; i < vals.rows(); ++i) {
            double v = gamma_mean;
            if (gamma_var > 1e-12) {
                std::gamma_distribution<double> gamma(gamma_mean * gamma_mean / gamma_var,
                                                     gamma_var / gamma_mean);
                v = gamma(rng);
            }
            const double sd = std::sqrt(v);
            for (Eigen::Index t = 0; t < vals.cols(); ++t) vals(i, t) += sd * normal(rng);
        }
    }
    return out;
}

TrueGraphCatalog default_true_graphs() {
    const std::vector<Edge> six = {{0, 1}, {0, 2}, {1, 2}, {2, 3},
                                   {2, 4}, {3, 4}, {4, 5}};
    std::vector<Edge> sixty;
    auto add_clique = [&](int lo, int hi) {  // inclusive node range
        for (int i = lo; i <= hi; ++i)
            for (int j = i + 1; j <= hi; ++j) sixty.emplace_back(i, j);
    };
    add_clique(0, 9);    // 45 edges
    add_clique(10, 13);  // 6
    add_clique(14, 17);  // 6
    return TrueGraphCatalog{DecomposableGraph(6, six), DecomposableGraph(60, sixty)};
}

}  // namespace fgm
