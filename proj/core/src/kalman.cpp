// SPDX-License-Identifier: Apache-2.0
#include "ssfr/kalman.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "ssfr/errors.hpp"

namespace ssfr {

FilterConfig default_filter_config(const FuturesPanel& futures) {
    futures.validate();
    FilterConfig config;
    config.a0 << 0.0, futures.log_prices.row(0).mean();
    return config;
}

std::pair<Eigen::Vector2d, Eigen::Matrix2d> kalman_predict(const Eigen::Vector2d& a,
                                                           const Eigen::Matrix2d& P,
                                                           const Eigen::Vector2d& C,
                                                           const Eigen::Matrix2d& E,
                                                           const Eigen::Matrix2d& Sigma_v,
                                                           bool symmetrize) {
    Eigen::Vector2d a_pred = C + E * a;
    Eigen::Matrix2d P_pred = E * P * E.transpose() + Sigma_v;
    if (symmetrize) P_pred = 0.5 * (P_pred + P_pred.transpose()).eval();
    return {a_pred, P_pred};
}

KalmanUpdate kalman_update(const Eigen::Vector2d& a_pred, const Eigen::Matrix2d& P_pred,
                           const Eigen::VectorXd& y, const Eigen::VectorXd& D,
                           const Eigen::MatrixXd& F, const Eigen::MatrixXd& Gamma,
                           const Eigen::VectorXd& u_t, const Eigen::VectorXd& Sigma_w,
                           bool symmetrize) {
    const Eigen::Index p = y.size();
    if (D.size() != p || F.rows() != p || F.cols() != 2 || Sigma_w.size() != p) {
        throw Error(ErrorCode::domain, "measurement shapes do not agree");
    }
    if (Gamma.cols() != u_t.size() || (u_t.size() > 0 && Gamma.rows() != p)) {
        throw Error(ErrorCode::domain, "Gamma / factor-score shapes do not agree");
    }

    KalmanUpdate out;
    out.e = y - D - F * a_pred;
    if (u_t.size() > 0) out.e -= Gamma * u_t;

    out.L = F * P_pred * F.transpose();
    out.L.diagonal() += Sigma_w;
    if (!out.L.allFinite()) {
        throw Error(ErrorCode::numeric, "innovation covariance has non-finite entries");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(out.L);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::numeric, "innovation covariance is not positive definite");
    }

    // K = P_pred F' L^{-1}, computed as the transpose of L^{-1} F P_pred.
    const Eigen::Matrix<double, 2, Eigen::Dynamic> K =
        llt.solve(F * P_pred).transpose();
    out.a = a_pred + K * out.e;
    Eigen::Matrix2d P = (Eigen::Matrix2d::Identity() - K * F) * P_pred;
    if (symmetrize) P = 0.5 * (P + P.transpose()).eval();
    out.P = P;

    const double quad = out.e.dot(llt.solve(out.e));
    const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    out.step_loglik = -0.5 * (quad + logdet);
    if (!std::isfinite(out.step_loglik)) {
        throw Error(ErrorCode::numeric, "non-finite likelihood contribution");
    }
    return out;
}

namespace {

// Shared forward recursion; `out` may be null when only the likelihood is
// needed. Throws on structural problems, returns -inf on numeric failure.
double forward_pass(const AlignedDataset& dataset, const ModelParams& params,
                    const FactorScores* scores, const FilterConfig& config, FilterOutput* out) {
    params.validate();
    const FuturesPanel& futures = dataset.futures;
    futures.validate();
    const auto n = static_cast<Eigen::Index>(futures.dates.size());
    const Eigen::Index p = params.n_tenors();
    if (static_cast<Eigen::Index>(futures.tenors.size()) != p) {
        throw Error(ErrorCode::domain, "futures tenor count does not match meas_std length");
    }
    if ((params.Q > 0) != (scores != nullptr)) {
        throw Error(ErrorCode::domain, "factor scores must be supplied exactly when Q > 0");
    }
    if (scores) {
        if (scores->U.cols() != params.Q) {
            throw Error(ErrorCode::domain, "factor-score width does not match Q");
        }
        if (scores->dates != futures.dates) {
            throw Error(ErrorCode::domain, "factor-score dates do not match the futures panel");
        }
    }
    Eigen::LLT<Eigen::Matrix2d> p0_chol(config.P0);
    if (p0_chol.info() != Eigen::Success) {
        throw Error(ErrorCode::domain, "initial state covariance must be positive definite");
    }

    const StateSpaceMatrices ss = state_space(params, futures.tenors, dataset.dt);
    const Eigen::MatrixXd empty_gamma(p, 0);
    const Eigen::VectorXd empty_u(0);

    if (out) {
        out->a_pred.resize(n, 2);
        out->a_filt.resize(n, 2);
        out->P_pred.resize(static_cast<std::size_t>(n));
        out->P_filt.resize(static_cast<std::size_t>(n));
        out->innovations.resize(n, p);
        out->innovation_cov.resize(static_cast<std::size_t>(n));
    }

    Eigen::Vector2d a = config.a0;
    Eigen::Matrix2d P = config.P0;
    double loglik = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
        auto [a_pred, P_pred] = kalman_predict(a, P, ss.C, ss.E, ss.Sigma_v, config.symmetrize);
        KalmanUpdate step;
        try {
            step = kalman_update(a_pred, P_pred, futures.log_prices.row(t).transpose(), ss.D,
                                 ss.F, scores ? params.Gamma : empty_gamma,
                                 scores ? Eigen::VectorXd(scores->U.row(t).transpose()) : empty_u,
                                 ss.Sigma_w, config.symmetrize);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::numeric) {
                return -std::numeric_limits<double>::infinity();
            }
            throw;
        }
        a = step.a;
        P = step.P;
        loglik += step.step_loglik;
        if (out) {
            out->a_pred.row(t) = a_pred.transpose();
            out->a_filt.row(t) = a.transpose();
            out->P_pred[static_cast<std::size_t>(t)] = P_pred;
            out->P_filt[static_cast<std::size_t>(t)] = P;
            out->innovations.row(t) = step.e.transpose();
            out->innovation_cov[static_cast<std::size_t>(t)] = step.L;
        }
    }
    return loglik;
}

}  // namespace

FilterOutput run_filter(const AlignedDataset& dataset, const ModelParams& params,
                        const FactorScores* scores, const FilterConfig& config) {
    FilterOutput out;
    out.loglik = forward_pass(dataset, params, scores, config, &out);
    return out;
}

double filter_loglik(const AlignedDataset& dataset, const ModelParams& params,
                     const FactorScores* scores, const FilterConfig& config) {
    return forward_pass(dataset, params, scores, config, nullptr);
}

}  // namespace ssfr
