// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "ssfr/kpca.hpp"
#include "ssfr/model.hpp"
#include "ssfr/panels.hpp"

namespace ssfr {

struct FilterConfig {
    Eigen::Vector2d a0 = Eigen::Vector2d::Zero();
    Eigen::Matrix2d P0 = 0.5 * Eigen::Matrix2d::Identity();
    bool symmetrize = true;  // re-symmetrize covariances every step
};

/// a0 = (0, mean of the first date's log prices); P0 = diag(0.5, 0.5). The
/// long factor carries the price level, the short factor mean-reverts to zero.
FilterConfig default_filter_config(const FuturesPanel& futures);

struct FilterOutput {
    Eigen::MatrixXd a_pred;  // N x 2 one-step-ahead state means
    Eigen::MatrixXd a_filt;  // N x 2 filtered state means
    std::vector<Eigen::Matrix2d> P_pred;
    std::vector<Eigen::Matrix2d> P_filt;
    Eigen::MatrixXd innovations;                  // N x P
    std::vector<Eigen::MatrixXd> innovation_cov;  // N of P x P
    double loglik = 0.0;
};

std::pair<Eigen::Vector2d, Eigen::Matrix2d> kalman_predict(const Eigen::Vector2d& a,
                                                           const Eigen::Matrix2d& P,
                                                           const Eigen::Vector2d& C,
                                                           const Eigen::Matrix2d& E,
                                                           const Eigen::Matrix2d& Sigma_v,
                                                           bool symmetrize = true);

struct KalmanUpdate {
    Eigen::Vector2d a;
    Eigen::Matrix2d P;
    Eigen::VectorXd e;  // innovation
    Eigen::MatrixXd L;  // innovation covariance
    double step_loglik = 0.0;  // -(e' L^{-1} e + log|L|)/2
};

/// One measurement update. Gain is obtained from a Cholesky solve of L; the
/// covariance update keeps the (I - K F) P form with optional symmetrization.
/// Throws Error(numeric) when L is not positive definite.
KalmanUpdate kalman_update(const Eigen::Vector2d& a_pred, const Eigen::Matrix2d& P_pred,
                           const Eigen::VectorXd& y, const Eigen::VectorXd& D,
                           const Eigen::MatrixXd& F, const Eigen::MatrixXd& Gamma,
                           const Eigen::VectorXd& u_t, const Eigen::VectorXd& Sigma_w,
                           bool symmetrize = true);

/// Full forward pass. `scores` must be present exactly when params.Q > 0 and
/// share the dataset's dates. The log-likelihood omits the -NP/2 log(2 pi)
/// constant. Numerically infeasible parameter points yield loglik = -inf
/// instead of throwing; structural errors (shape/date mismatches) throw.
FilterOutput run_filter(const AlignedDataset& dataset, const ModelParams& params,
                        const FactorScores* scores, const FilterConfig& config);

/// Log-likelihood without storing per-step output; same recursion as
/// run_filter. Returns -inf for infeasible points.
double filter_loglik(const AlignedDataset& dataset, const ModelParams& params,
                     const FactorScores* scores, const FilterConfig& config);

}  // namespace ssfr
