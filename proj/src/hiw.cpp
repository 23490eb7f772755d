#include "fgm/hiw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fgm {

BlockLayout::BlockLayout(std::vector<int> m) : truncations(std::move(m)) {
    offsets.reserve(truncations.size());
    for (int mj : truncations) {
        if (mj < 1) throw DimensionMismatchError("truncation M_j must be >= 1");
        offsets.push_back(total);
        total += mj;
    }
}

std::vector<int> BlockLayout::indices(const std::vector<int>& nodes) const {
    std::vector<int> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> idx;
    idx.reserve(dim(nodes));
    for (int j : sorted) {
        for (int k = 0; k < truncations[j]; ++k) idx.push_back(offsets[j] + k);
    }
    return idx;
}

int BlockLayout::dim(const std::vector<int>& nodes) const {
    int d = 0;
    for (int j : nodes) d += truncations[j];
    return d;
}

HiwParams::HiwParams(int delta_, Eigen::MatrixXd scale_)
    : delta(delta_), scale(std::move(scale_)) {
    if (delta < 1) throw DomainError("delta must be >= 1");
    if (scale.rows() != scale.cols()) throw DimensionMismatchError("scale must be square");
    if (!scale.isApprox(scale.transpose(), 1e-10))
        throw DomainError("scale must be symmetric");
}

double log_multigamma(int b, double a) {
    if (b < 0) throw DomainError("dimension must be nonnegative");
    if (b == 0) return 0.0;
    if (a <= 0.5 * (b - 1)) throw DomainError("multigamma pole: a <= (b-1)/2");
    double out = 0.25 * b * (b - 1) * std::log(std::numbers::pi);
    for (int i = 0; i < b; ++i) out += std::lgamma(a - 0.5 * i);
    return out;
}

double log_det_spd(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw NotSpdError("Cholesky factorization failed");
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
    return out;
}

Eigen::MatrixXd sample_wishart(double df, const Eigen::MatrixXd& scale, Rng& rng) {
    const auto d = scale.rows();
    if (df <= d - 1) throw DomainError("Wishart df must exceed d - 1");
    Eigen::LLT<Eigen::MatrixXd> llt(scale);
    if (llt.info() != Eigen::Success) throw NotSpdError("Wishart scale not SPD");
    const Eigen::MatrixXd L = llt.matrixL();

    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        std::chi_squared_distribution<double> chi2(df - i);
        A(i, i) = std::sqrt(chi2(rng));
        for (Eigen::Index j = 0; j < i; ++j) A(i, j) = normal(rng);
    }
    const Eigen::MatrixXd LA = L * A;
    return LA * LA.transpose();
}

Eigen::MatrixXd sample_iw_dawid(int delta, const Eigen::MatrixXd& scale, Rng& rng) {
    const auto d = scale.rows();
    if (delta < 1) throw DomainError("delta must be >= 1");
    Eigen::LLT<Eigen::MatrixXd> llt(scale);
    if (llt.info() != Eigen::Success) throw NotSpdError("IW scale not SPD");
    const Eigen::MatrixXd scale_inv =
        llt.solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd w = sample_wishart(delta + d - 1.0, scale_inv, rng);
    Eigen::LLT<Eigen::MatrixXd> lltw(w);
    if (lltw.info() != Eigen::Success) throw NotSpdError("Wishart draw not SPD");
    return lltw.solve(Eigen::MatrixXd::Identity(d, d));
}

namespace {

// one clique/separator term of log h
double h_term(int delta, const Eigen::MatrixXd& block) {
    const int d = static_cast<int>(block.rows());
    if (d == 0) return 0.0;
    const double a = 0.5 * (delta + d - 1);
    const double logdet_half = log_det_spd(block) - d * std::numbers::ln2;
    return a * logdet_half - log_multigamma(d, a);
}

}  // namespace

double log_h(const HiwParams& params, const BlockLayout& layout,
             const JunctionSequence& junction) {
    double out = 0.0;
    for (const auto& c : junction.cliques)
        out += h_term(params.delta, submatrix(params.scale, layout.indices(c), layout.indices(c)));
    for (const auto& s : junction.separators)
        out -= h_term(params.delta, submatrix(params.scale, layout.indices(s), layout.indices(s)));
    return out;
}

HiwParams hiw_posterior_update(const HiwParams& params, const Eigen::VectorXd& c0,
                               const Eigen::MatrixXd& samples) {
    if (samples.cols() != params.scale.rows() || c0.size() != params.scale.rows())
        throw DimensionMismatchError("coefficient dimension does not match scale");
    const Eigen::MatrixXd centered = samples.rowwise() - c0.transpose();
    return hiw_posterior_update_scatter(params, static_cast<int>(samples.rows()),
                                        centered.transpose() * centered);
}

HiwParams hiw_posterior_update_scatter(const HiwParams& params, int n,
                                       const Eigen::MatrixXd& scatter) {
    if (scatter.rows() != params.scale.rows())
        throw DimensionMismatchError("scatter dimension does not match scale");
    return HiwParams(params.delta + n, params.scale + scatter);
}

Eigen::MatrixXd markov_complete(const Eigen::MatrixXd& dense, const BlockLayout& layout,
                                const DecomposableGraph& graph) {
    const int total = layout.total;
    Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(total, total);
    const auto& js = graph.junction();

    auto scatter_inverse = [&](const std::vector<int>& nodes, double sign) {
        const auto idx = layout.indices(nodes);
        if (idx.empty()) return;
        const Eigen::MatrixXd block = submatrix(dense, idx, idx);
        Eigen::LLT<Eigen::MatrixXd> llt(block);
        if (llt.info() != Eigen::Success) throw NotSpdError("clique block not SPD");
        const Eigen::MatrixXd inv =
            llt.solve(Eigen::MatrixXd::Identity(block.rows(), block.cols()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j)
                precision(idx[i], idx[j]) += sign * inv(i, j);
    };
    for (const auto& c : js.cliques) scatter_inverse(c, 1.0);
    for (const auto& s : js.separators) scatter_inverse(s, -1.0);

    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) throw NotSpdError("completed precision not SPD");
    return llt.solve(Eigen::MatrixXd::Identity(total, total));
}

CovarianceDraw sample_hiw_completed(const HiwParams& params, const BlockLayout& layout,
                                    const DecomposableGraph& graph, Rng& rng) {
    if (layout.node_count() != graph.node_count())
        throw DimensionMismatchError("layout/graph node counts differ");
    const auto& js = graph.junction();
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(layout.total, layout.total);
    std::normal_distribution<double> normal(0.0, 1.0);

    for (std::size_t t = 0; t < js.cliques.size(); ++t) {
        const auto& clique = js.cliques[t];
        const std::vector<int> sep_nodes = (t == 0) ? std::vector<int>{} : js.separators[t - 1];
        std::vector<int> rest_nodes;
        for (int v : clique)
            if (std::find(sep_nodes.begin(), sep_nodes.end(), v) == sep_nodes.end())
                rest_nodes.push_back(v);
        if (rest_nodes.empty()) continue;  // clique fully determined by predecessors

        const auto sep_idx = layout.indices(sep_nodes);
        const auto rest_idx = layout.indices(rest_nodes);
        const Eigen::MatrixXd u_rr = submatrix(params.scale, rest_idx, rest_idx);

        if (sep_idx.empty()) {
            const Eigen::MatrixXd draw = sample_iw_dawid(params.delta, u_rr, rng);
            for (std::size_t i = 0; i < rest_idx.size(); ++i)
                for (std::size_t j = 0; j < rest_idx.size(); ++j)
                    q(rest_idx[i], rest_idx[j]) = draw(i, j);
            continue;
        }

        // conditional draw given the already-fixed separator block: regression
        // decomposition of the Dawid inverse-Wishart
        const Eigen::MatrixXd u_ss = submatrix(params.scale, sep_idx, sep_idx);
        const Eigen::MatrixXd u_rs = submatrix(params.scale, rest_idx, sep_idx);
        Eigen::LLT<Eigen::MatrixXd> llt_uss(u_ss);
        if (llt_uss.info() != Eigen::Success) throw NotSpdError("separator scale not SPD");
        const Eigen::MatrixXd u_ss_inv =
            llt_uss.solve(Eigen::MatrixXd::Identity(u_ss.rows(), u_ss.cols()));
        const Eigen::MatrixXd u_cond = u_rr - u_rs * u_ss_inv * u_rs.transpose();

        const int d_s = static_cast<int>(sep_idx.size());
        const Eigen::MatrixXd sigma_cond = sample_iw_dawid(params.delta + d_s, u_cond, rng);

        Eigen::LLT<Eigen::MatrixXd> llt_cond(sigma_cond);
        Eigen::LLT<Eigen::MatrixXd> llt_ssinv(u_ss_inv);
        if (llt_cond.info() != Eigen::Success || llt_ssinv.info() != Eigen::Success)
            throw NotSpdError("conditional draw not SPD");
        Eigen::MatrixXd z(rest_idx.size(), sep_idx.size());
        for (Eigen::Index i = 0; i < z.rows(); ++i)
            for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = normal(rng);
        const Eigen::MatrixXd coef =
            u_rs * u_ss_inv +
            llt_cond.matrixL().toDenseMatrix() * z *
                llt_ssinv.matrixL().toDenseMatrix().transpose();

        const Eigen::MatrixXd q_ss = submatrix(q, sep_idx, sep_idx);
        const Eigen::MatrixXd q_rs = coef * q_ss;
        const Eigen::MatrixXd q_rr = sigma_cond + coef * q_ss * coef.transpose();
        for (std::size_t i = 0; i < rest_idx.size(); ++i) {
            for (std::size_t j = 0; j < sep_idx.size(); ++j) {
                q(rest_idx[i], sep_idx[j]) = q_rs(i, j);
                q(sep_idx[j], rest_idx[i]) = q_rs(i, j);
            }
            for (std::size_t j = 0; j < rest_idx.size(); ++j)
                q(rest_idx[i], rest_idx[j]) = q_rr(i, j);
        }
    }

    CovarianceDraw out{markov_complete(q, layout, graph), graph};
    return out;
}

}  // namespace fgm
