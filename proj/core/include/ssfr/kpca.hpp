// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "ssfr/kernel.hpp"
#include "ssfr/panels.hpp"

namespace ssfr {

/// Fitted kernel-PCA state over the yield-tenor time series. The M training
/// rows are the per-tenor yield histories; factors live on the tenor grid.
///
/// Conventions fixed at fit time, so results are deterministic across
/// linear-algebra backends:
///  - eigenvalues descending, all strictly above tolerance * lambda_max;
///  - each column of R (and of basis) sign-flipped so its largest-magnitude
///    entry is positive;
///  - basis columns orthonormal under the quadrature inner product.
struct KpcaModel {
    KernelSpec spec;  // bandwidth resolved (non-null for rbf)
    std::vector<Eigen::VectorXd> train_rows;  // M rows, each length N
    std::vector<Tenor> tenors;                // grid, size M
    Eigen::MatrixXd K;            // M x M kernel matrix (centered iff `centered`)
    Eigen::VectorXd eigenvalues;  // Q kept eigenvalues, descending
    Eigen::MatrixXd R;            // M x Q, orthonormal eigenvectors of K
    Eigen::MatrixXd scores;       // A = R Lambda^{1/2}
    Eigen::MatrixXd weights;      // W = A Lambda^{-1}
    Eigen::MatrixXd basis;        // M x Q basis values e_q(tau_i)
    Eigen::VectorXd quadrature;   // M positive trapezoid weights, year units
    bool centered = false;

    // Raw-kernel statistics needed to project new points under centering.
    Eigen::VectorXd center_means;
    double center_grand_mean = 0.0;

    Eigen::Index n_rows() const { return static_cast<Eigen::Index>(train_rows.size()); }
    Eigen::Index n_factors() const { return eigenvalues.size(); }
};

/// Karhunen-Loeve factor scores: row t holds the Q quadrature integrals of
/// date-t's yield curve against the basis functions.
struct FactorScores {
    std::vector<MonthStamp> dates;
    Eigen::MatrixXd U;  // N x Q

    Eigen::Index n_factors() const { return U.cols(); }
};

/// Trapezoid weights on the tenor grid in year units.
Eigen::VectorXd trapezoid_weights(const std::vector<Tenor>& grid);

/// Builds the kernel matrix over the M tenor rows, eigendecomposes it, and
/// keeps the Q leading components strictly above eigen_tolerance * lambda_max.
/// An unset rbf bandwidth is resolved with the median heuristic. Feature-space
/// centering is off by default.
KpcaModel fit_kpca(const YieldPanel& yields, const KernelSpec& spec, int n_factors,
                   double eigen_tolerance = 1e-10, bool center = false);

/// Out-of-sample projection of a new tenor series onto the fitted components:
/// alpha*_q = sum_i W(i,q) k(z_star, row_i).
Eigen::VectorXd project_new_tenor(const KpcaModel& model, const Eigen::VectorXd& z_star);

/// Basis values e_q(tau_i) on the training grid.
const Eigen::MatrixXd& basis_values(const KpcaModel& model);

/// Quadrature approximation of U_tj = integral of Z_t(s) e_j(s) ds over the
/// observed tenor range. The panel must live on the model's tenor grid.
FactorScores factor_scores(const KpcaModel& model, const YieldPanel& yields);

}  // namespace ssfr
