// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ssfr/panels.hpp"

namespace ssfr {

/// Two-factor model parameters, plus the functional-regression loading matrix
/// Gamma. Q = 0 (empty Gamma) is the pure two-factor model. Units: rates are
/// 1/years, volatilities 1/sqrt(years); tenors enter the formulas in years.
struct ModelParams {
    double kappa_chi = 1.0;   // mean-reversion speed of the short factor
    double kappa_xi = 0.1;    // mean-reversion speed of the long factor
    double mu_xi = 0.0;       // drift level of the long factor
    double sigma_chi = 0.3;
    double sigma_xi = 0.3;
    double rho = 0.0;         // Brownian correlation, |rho| < 1
    double lambda_chi = 0.0;  // risk premia
    double lambda_xi = 0.0;
    Eigen::VectorXd meas_std;  // per-tenor measurement noise std, length P
    Eigen::MatrixXd Gamma;     // P x Q yield-factor loadings
    int Q = 0;

    Eigen::Index n_tenors() const { return meas_std.size(); }

    /// Throws Error(domain) on any violated constraint, including the
    /// kappa_chi > kappa_xi > 0 ordering that pins the factor labels.
    void validate() const;
};

struct StateVector {
    double chi = 0.0;  // short-term deviation of log price
    double xi = 0.0;   // long-term equilibrium log level
};

/// Transition block of the state equation X_t = C + E X_{t-1} + v_t over one
/// step of length dt.
struct Transition {
    Eigen::Vector2d C;
    Eigen::Matrix2d E;        // diagonal, entries in (0,1)
    Eigen::Matrix2d Sigma_v;  // exact-discretization innovation covariance
};

/// Measurement block Y_t = D + F X_t (+ Gamma U_t) + w_t. Time-invariant under
/// the constant-tenor convention. Sigma_w holds the diagonal of the P x P
/// measurement covariance.
struct Measurement {
    Eigen::VectorXd D;        // P
    Eigen::MatrixXd F;        // P x 2
    Eigen::VectorXd Sigma_w;  // P variances
};

struct StateSpaceMatrices {
    Eigen::Vector2d C;
    Eigen::Matrix2d E;
    Eigen::Matrix2d Sigma_v;
    Eigen::VectorXd D;
    Eigen::MatrixXd F;
    Eigen::VectorXd Sigma_w;  // diagonal of the measurement covariance
};

/// Deterministic log-futures intercept A(tau): risk-premium terms plus half
/// the risk-neutral log-variance accumulated over tau years. A(0) = 0.
double a_function(const ModelParams& params, double tau_years);

Transition state_transition(const ModelParams& params, double dt);

/// Measurement matrices on an ascending tenor grid given in years. The grid
/// length must equal params.meas_std.size().
Measurement measurement(const ModelParams& params, std::span<const double> tenor_years);
Measurement measurement(const ModelParams& params, const std::vector<Tenor>& tenors);

StateSpaceMatrices state_space(const ModelParams& params, std::span<const double> tenor_years,
                               double dt);
StateSpaceMatrices state_space(const ModelParams& params, const std::vector<Tenor>& tenors,
                               double dt);

/// D + F x + Gamma u. Throws Error(domain) on shape mismatch.
Eigen::VectorXd fr_measurement_mean(const StateSpaceMatrices& matrices, const StateVector& state,
                                    const Eigen::MatrixXd& Gamma, const Eigen::VectorXd& u_t);

std::vector<double> tenor_years(const std::vector<Tenor>& tenors);

struct SimulationResult {
    FuturesPanel panel;
    std::vector<StateVector> states;  // X_1 .. X_n
};

/// Draws a state path from the exact Gaussian transition and observations from
/// the measurement equation. When params.Q > 0 a u_series with n_steps rows
/// must be supplied. Dates are consecutive months starting at `start`; the
/// whole path is reproducible from `seed`.
SimulationResult simulate(const ModelParams& params, const std::vector<Tenor>& tenors,
                          int n_steps, double dt,
                          const std::optional<Eigen::MatrixXd>& u_series, std::uint64_t seed,
                          MonthStamp start = MonthStamp::parse("2000-01"),
                          StateVector x0 = StateVector{});

}  // namespace ssfr
