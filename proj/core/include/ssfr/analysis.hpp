// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "ssfr/kalman.hpp"
#include "ssfr/kpca.hpp"
#include "ssfr/model.hpp"

namespace ssfr {

struct RmseTable {
    Eigen::VectorXd per_tenor;
    double mean = 0.0;
};

struct CoefficientCurve {
    std::vector<Tenor> tenor_grid;
    Eigen::MatrixXd gamma_values;  // P x M, row i is gamma_i(.) on the grid
};

enum class Regime { contango, backwardation };

/// Which state estimate feeds the fitted values. `predicted` (one step ahead)
/// is consistent with the likelihood's innovations and is the default.
enum class FittedStateKind { predicted, filtered };

/// Fitted measurement means: D + F a_t + Gamma u_t per date, with a_t either
/// the predicted or the filtered state mean.
Eigen::MatrixXd fitted_log_prices(const FilterOutput& output, const StateSpaceMatrices& matrices,
                                  const Eigen::MatrixXd& Gamma, const FactorScores* scores,
                                  FittedStateKind kind = FittedStateKind::predicted);

RmseTable rmse_table(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat);

/// Entry (t, i) = sum_j Gamma(i,j) U(t,j): the yield-curve contribution to
/// contract i's fitted log price.
Eigen::MatrixXd functional_component(const Eigen::MatrixXd& Gamma, const FactorScores& scores);

/// exp() of every entry; throws Error(numeric, "price overflow") when the
/// result leaves the finite range.
Eigen::MatrixXd exp_prices(const Eigen::MatrixXd& log_prices);

struct PriceDecomposition {
    Eigen::MatrixXd ss_price;    // exp(D + F a_t), two-factor part in USD
    Eigen::MatrixXd multiplier;  // exp(Gamma u_t), yield-curve adjustment
};

/// Splits the fitted USD price into the two-factor price and the functional
/// multiplier; their product equals exp(fitted log price).
PriceDecomposition price_decomposition(const FilterOutput& output,
                                       const StateSpaceMatrices& matrices,
                                       const Eigen::MatrixXd& Gamma, const FactorScores& scores,
                                       FittedStateKind kind = FittedStateKind::predicted);

/// gamma_i(tau_j) = sum_k Gamma(i,k) e_k(tau_j) on the model's tenor grid.
CoefficientCurve coefficient_curves(const Eigen::MatrixXd& Gamma, const KpcaModel& kpca_model);

/// Per-date curve regime: contango iff the short-tenor yield does not exceed
/// the long-tenor yield (ties count as contango).
std::vector<Regime> contango_indicator(const YieldPanel& yields, Tenor short_tenor,
                                       Tenor long_tenor);

const char* regime_name(Regime regime);

}  // namespace ssfr
