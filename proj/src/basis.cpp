#include "fgm/basis.hpp"

#include <cmath>
#include <numbers>

namespace fgm {

void FunctionalDataset::validate() const {
    if (grids.size() != values.size())
        throw DimensionMismatchError("grids/values node counts differ");
    for (std::size_t j = 0; j < grids.size(); ++j) {
        if (grids[j].size() < 4) throw DegenerateGridError("grid needs >= 4 points");
        for (Eigen::Index t = 1; t < grids[j].size(); ++t)
            if (!(grids[j](t) > grids[j](t - 1)))
                throw DegenerateGridError("grid must be strictly increasing");
        if (values[j].cols() != grids[j].size())
            throw DimensionMismatchError("curve length does not match grid");
        if (!values[j].allFinite()) throw DimensionMismatchError("non-finite curve values");
        if (values[j].rows() != values[0].rows())
            throw DimensionMismatchError("sample count differs across nodes");
    }
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& grid) {
    const auto m = grid.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for (Eigen::Index t = 0; t + 1 < m; ++t) {
        const double h = 0.5 * (grid(t + 1) - grid(t));
        w(t) += h;
        w(t + 1) += h;
    }
    return w;
}

FpcaResult fpca(const FunctionalDataset& data) { return fpca(data, {}); }

FpcaResult fpca(const FunctionalDataset& data, const std::vector<double>& noise_s2) {
    data.validate();
    if (data.sample_count() < 2) throw TooFewSamplesError("FPCA needs n >= 2");
    if (!noise_s2.empty() && static_cast<int>(noise_s2.size()) != data.node_count())
        throw DimensionMismatchError("one noise variance per node required");

    FpcaResult out;
    out.system.kind = BasisSystem::Kind::Eigenbasis;
    const int n = data.sample_count();

    for (int j = 0; j < data.node_count(); ++j) {
        const auto& grid = data.grids[j];
        const auto m = grid.size();
        const Eigen::VectorXd w = trapezoid_weights(grid);
        const Eigen::VectorXd sqrt_w = w.array().sqrt();

        const Eigen::VectorXd mean = data.values[j].colwise().mean();
        const Eigen::MatrixXd centered = data.values[j].rowwise() - mean.transpose();
        Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
        if (!noise_s2.empty()) {
            // white measurement noise adds a ridge on the covariance
            // diagonal; stripping it keeps the spectrum (and hence the
            // variance-fraction truncation) at the underlying signal.
            // noise_s2 is on the coefficient scale sigma^2 |T| / (m - 1)
            const double span = grid(m - 1) - grid(0);
            const double sigma2 = noise_s2[j] * double(m - 1) / span;
            cov.diagonal().array() -= sigma2;
        }

        // quadrature-weighted eigenproblem keeps eigenfunctions L2-orthonormal
        const Eigen::MatrixXd weighted =
            sqrt_w.asDiagonal() * cov * sqrt_w.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weighted);
        if (es.info() != Eigen::Success) throw NotSpdError("eigendecomposition failed");

        // finite-sample scatter spreads pure-noise eigenvalues up to the
        // Marchenko-Pastur edge; anything below it is indistinguishable
        // from noise and excluded from the spectrum
        double floor_cut = 0.0;
        if (!noise_s2.empty()) {
            const double edge = 1.0 + std::sqrt(double(m) / double(n));
            floor_cut = noise_s2[j] * edge * edge;
        }
        Eigen::VectorXd evals(m);
        Eigen::MatrixXd funcs(m, m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const Eigen::Index src = m - 1 - k;  // descending order
            evals(k) = std::max(es.eigenvalues()(src), 0.0);
            if (evals(k) < floor_cut) evals(k) = 0.0;
            Eigen::VectorXd phi = es.eigenvectors().col(src).array() / sqrt_w.array();
            Eigen::Index imax;
            phi.cwiseAbs().maxCoeff(&imax);
            if (phi(imax) < 0) phi = -phi;
            funcs.col(k) = phi;
        }

        out.system.means.push_back(mean);
        out.system.eigenvalues.push_back(evals);
        out.system.functions.push_back(funcs);
        out.scores.push_back(centered * w.asDiagonal() * funcs);
    }
    return out;
}

Eigen::MatrixXd fourier_basis(const Eigen::VectorXd& grid, int n_funcs) {
    const double a = grid(0);
    const double len = grid(grid.size() - 1) - a;
    if (!(len > 0)) throw DegenerateGridError("degenerate grid interval");
    Eigen::MatrixXd phi(grid.size(), n_funcs);
    for (int k = 0; k < n_funcs; ++k) {
        for (Eigen::Index t = 0; t < grid.size(); ++t) {
            const double u = (grid(t) - a) / len;
            if (k == 0) {
                phi(t, k) = 1.0 / std::sqrt(len);
            } else {
                const int freq = (k + 1) / 2;
                const double arg = 2.0 * std::numbers::pi * freq * u;
                phi(t, k) = std::sqrt(2.0 / len) * ((k % 2 == 1) ? std::sin(arg) : std::cos(arg));
            }
        }
    }
    return phi;
}

std::vector<Eigen::MatrixXd> project_fourier(const FunctionalDataset& data,
                                             const std::vector<int>& truncations,
                                             bool center) {
    data.validate();
    if (truncations.size() != static_cast<std::size_t>(data.node_count()))
        throw DimensionMismatchError("one truncation per node required");
    std::vector<Eigen::MatrixXd> scores;
    for (int j = 0; j < data.node_count(); ++j) {
        const Eigen::VectorXd w = trapezoid_weights(data.grids[j]);
        const Eigen::MatrixXd phi = fourier_basis(data.grids[j], truncations[j]);
        const Eigen::MatrixXd gram = phi.transpose() * w.asDiagonal() * phi;
        const double gram_err =
            (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
        if (gram_err > 1e-3) throw DegenerateGridError("grid too coarse for Fourier basis");
        Eigen::MatrixXd vals = data.values[j];
        if (center) vals.rowwise() -= data.values[j].colwise().mean();
        scores.push_back(vals * w.asDiagonal() * phi);
    }
    return scores;
}

int fve_truncate(const Eigen::VectorXd& eigenvalues, double threshold) {
    const double total = eigenvalues.sum();
    if (!(total > 0.0)) throw AllZeroError("all eigenvalues are zero");
    double cum = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
        cum += eigenvalues(k);
        if (cum / total >= threshold) return static_cast<int>(k) + 1;
    }
    return static_cast<int>(eigenvalues.size());
}

Eigen::VectorXd local_linear_smooth(const Eigen::VectorXd& grid, const Eigen::VectorXd& y,
                                    double bandwidth) {
    const auto m = grid.size();
    Eigen::VectorXd out(m);
    for (Eigen::Index t = 0; t < m; ++t) {
        double s0 = 0, s1 = 0, s2 = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double u = (grid(i) - grid(t)) / bandwidth;
            if (std::abs(u) > 1.0) continue;
            const double k = 0.75 * (1.0 - u * u);  // Epanechnikov
            const double d = grid(i) - grid(t);
            s0 += k;
            s1 += k * d;
            s2 += k * d * d;
        }
        const double denom = s2 * s0 - s1 * s1;
        double num = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double u = (grid(i) - grid(t)) / bandwidth;
            if (std::abs(u) > 1.0) continue;
            const double k = 0.75 * (1.0 - u * u);
            const double d = grid(i) - grid(t);
            num += k * (s2 - d * s1) * y(i);
        }
        out(t) = (denom > 1e-300) ? num / denom : y(t);
    }
    return out;
}

std::vector<double> estimate_noise_variance(const FunctionalDataset& data) {
    data.validate();
    std::vector<double> s2;
    for (int j = 0; j < data.node_count(); ++j) {
        const auto& grid = data.grids[j];
        const auto m = grid.size();
        if (m < 10) throw DegenerateGridError("noise estimation needs m >= 10");
        const double width = grid(m - 1) - grid(0);
        const double bw = 0.1 * width;
        double mse = 0.0;
        for (int i = 0; i < data.sample_count(); ++i) {
            const Eigen::VectorXd y = data.values[j].row(i);
            const Eigen::VectorXd smooth = local_linear_smooth(grid, y, bw);
            mse += (y - smooth).squaredNorm() / double(m);
        }
        mse /= double(data.sample_count());
        s2.push_back(mse * width / double(m - 1));
    }
    return s2;
}

}  // namespace fgm
