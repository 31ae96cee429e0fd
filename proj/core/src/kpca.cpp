// SPDX-License-Identifier: Apache-2.0
#include "ssfr/kpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "ssfr/errors.hpp"

namespace ssfr {

Eigen::VectorXd trapezoid_weights(const std::vector<Tenor>& grid) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    if (m < 2) {
        throw Error(ErrorCode::domain, "trapezoid quadrature needs at least two tenors");
    }
    for (Eigen::Index i = 1; i < m; ++i) {
        if (!(grid[i - 1] < grid[i])) {
            throw Error(ErrorCode::domain, "tenor grid must be strictly increasing");
        }
    }
    Eigen::VectorXd w(m);
    w(0) = 0.5 * (grid[1].years() - grid[0].years());
    for (Eigen::Index i = 1; i + 1 < m; ++i) {
        w(i) = 0.5 * (grid[i + 1].years() - grid[i - 1].years());
    }
    w(m - 1) = 0.5 * (grid[m - 1].years() - grid[m - 2].years());
    return w;
}

namespace {

// Flip each column so its largest-magnitude entry is positive; ties go to the
// earliest row, so the convention is reproducible across backends.
void fix_column_signs(Eigen::MatrixXd& mat) {
    for (Eigen::Index q = 0; q < mat.cols(); ++q) {
        Eigen::Index arg = 0;
        mat.col(q).cwiseAbs().maxCoeff(&arg);
        if (mat(arg, q) < 0.0) mat.col(q) = -mat.col(q);
    }
}

}  // namespace

KpcaModel fit_kpca(const YieldPanel& yields, const KernelSpec& spec, int n_factors,
                   double eigen_tolerance, bool center) {
    yields.validate();
    const auto m = static_cast<Eigen::Index>(yields.tenors.size());
    if (m < 2) {
        throw Error(ErrorCode::domain, "kernel PCA needs at least two tenor rows");
    }
    if (n_factors < 1 || n_factors > m) {
        throw Error(ErrorCode::domain, "factor count must lie in [1, " + std::to_string(m) +
                                           "], got " + std::to_string(n_factors));
    }
    if (!(eigen_tolerance > 0.0)) {
        throw Error(ErrorCode::domain, "eigenvalue tolerance must be positive");
    }

    KpcaModel model;
    model.tenors = yields.tenors;
    model.train_rows.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        model.train_rows.push_back(yields.tenor_series(i));
    }

    model.spec = spec;
    if (model.spec.kind == KernelKind::rbf && !model.spec.bandwidth) {
        model.spec.bandwidth = median_bandwidth(model.train_rows);
    }

    Eigen::MatrixXd K(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) {
            const double v = kernel_value(model.train_rows[static_cast<std::size_t>(i)],
                                          model.train_rows[static_cast<std::size_t>(j)], model.spec);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    if (!K.allFinite()) {
        throw Error(ErrorCode::numeric, "kernel matrix has non-finite entries");
    }

    model.centered = center;
    if (center) {
        model.center_means = K.colwise().mean().transpose();
        model.center_grand_mean = K.mean();
        K.array().rowwise() -= model.center_means.transpose().array();
        K.array().colwise() -= model.center_means.array();
        K.array() += model.center_grand_mean;
        K = 0.5 * (K + K.transpose().eval());
    }
    model.K = K;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::numeric, "kernel eigendecomposition failed to converge");
    }
    const Eigen::VectorXd lambda_asc = eig.eigenvalues();
    const double lambda_max = lambda_asc(m - 1);
    if (!(lambda_max > 0.0)) {
        throw Error(ErrorCode::numeric, "kernel matrix has no positive eigenvalue");
    }
    if (lambda_asc(0) < -1e-8 * lambda_max) {
        throw Error(ErrorCode::numeric, "kernel matrix is not positive semi-definite");
    }

    const double cutoff = eigen_tolerance * lambda_max;
    Eigen::Index usable = 0;
    while (usable < m && lambda_asc(m - 1 - usable) > cutoff) ++usable;
    if (usable < n_factors) {
        throw Error(ErrorCode::numeric,
                    "only " + std::to_string(usable) + " eigenvalues exceed tolerance; " +
                        std::to_string(n_factors) + " factors requested");
    }

    const Eigen::Index q = n_factors;
    model.eigenvalues.resize(q);
    model.R.resize(m, q);
    for (Eigen::Index k = 0; k < q; ++k) {
        model.eigenvalues(k) = lambda_asc(m - 1 - k);
        model.R.col(k) = eig.eigenvectors().col(m - 1 - k);
    }
    fix_column_signs(model.R);

    const Eigen::VectorXd sqrt_lambda = model.eigenvalues.cwiseSqrt();
    model.scores = model.R * sqrt_lambda.asDiagonal();
    model.weights = model.scores * model.eigenvalues.cwiseInverse().asDiagonal();

    model.quadrature = trapezoid_weights(model.tenors);
    // e_q(tau_i) = A(i,q) / (sqrt(w_i) sqrt(lambda_q)) makes the columns exactly
    // orthonormal under the trapezoid inner product: sum_i w_i e_q e_k =
    // (A^T A)_{qk} / sqrt(lambda_q lambda_k) = delta_{qk}.
    model.basis =
        model.quadrature.cwiseSqrt().cwiseInverse().asDiagonal() * model.scores *
        sqrt_lambda.cwiseInverse().asDiagonal();
    fix_column_signs(model.basis);

    return model;
}

Eigen::VectorXd project_new_tenor(const KpcaModel& model, const Eigen::VectorXd& z_star) {
    const Eigen::Index m = model.n_rows();
    if (m == 0) {
        throw Error(ErrorCode::domain, "kernel PCA model has no training rows");
    }
    Eigen::VectorXd k_star(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        k_star(i) = kernel_value(z_star, model.train_rows[static_cast<std::size_t>(i)], model.spec);
    }
    if (!k_star.allFinite()) {
        throw Error(ErrorCode::numeric, "kernel values for projected point are non-finite");
    }
    if (model.centered) {
        const double k_bar = k_star.mean();
        k_star.array() -= model.center_means.array();
        k_star.array() += model.center_grand_mean - k_bar;
    }
    return model.weights.transpose() * k_star;
}

const Eigen::MatrixXd& basis_values(const KpcaModel& model) { return model.basis; }

FactorScores factor_scores(const KpcaModel& model, const YieldPanel& yields) {
    yields.validate();
    if (yields.tenors != model.tenors) {
        throw Error(ErrorCode::domain, "yield panel tenor grid does not match the fitted model");
    }
    FactorScores out;
    out.dates = yields.dates;
    // U(t,j) = sum_i w_i Z_t(tau_i) e_j(tau_i); yields.yields is M x N.
    out.U = yields.yields.transpose() * model.quadrature.asDiagonal() * model.basis;
    return out;
}

}  // namespace ssfr
