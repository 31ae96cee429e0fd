// SPDX-License-Identifier: Apache-2.0
#include "ssfr/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ssfr/errors.hpp"

namespace ssfr {

Eigen::MatrixXd fitted_log_prices(const FilterOutput& output, const StateSpaceMatrices& matrices,
                                  const Eigen::MatrixXd& Gamma, const FactorScores* scores,
                                  FittedStateKind kind) {
    const Eigen::MatrixXd& states =
        kind == FittedStateKind::predicted ? output.a_pred : output.a_filt;
    const Eigen::Index n = states.rows();
    const Eigen::Index p = matrices.D.size();
    if (scores && scores->U.rows() != n) {
        throw Error(ErrorCode::domain, "factor-score length does not match the filter output");
    }
    if (scores && (Gamma.rows() != p || Gamma.cols() != scores->U.cols())) {
        throw Error(ErrorCode::domain, "Gamma / factor-score shapes do not agree");
    }
    Eigen::MatrixXd y_hat = (states * matrices.F.transpose()).rowwise() + matrices.D.transpose();
    if (scores && scores->U.cols() > 0) y_hat += scores->U * Gamma.transpose();
    return y_hat;
}

RmseTable rmse_table(const Eigen::MatrixXd& y, const Eigen::MatrixXd& y_hat) {
    if (y.rows() != y_hat.rows() || y.cols() != y_hat.cols()) {
        throw Error(ErrorCode::domain, "observation and fitted matrices differ in shape");
    }
    if (y.rows() == 0 || y.cols() == 0) {
        throw Error(ErrorCode::domain, "RMSE needs a non-empty panel");
    }
    RmseTable table;
    table.per_tenor =
        ((y - y_hat).array().square().colwise().mean()).sqrt().matrix().transpose();
    table.mean = table.per_tenor.mean();
    return table;
}

Eigen::MatrixXd functional_component(const Eigen::MatrixXd& Gamma, const FactorScores& scores) {
    if (Gamma.cols() != scores.U.cols()) {
        throw Error(ErrorCode::domain, "Gamma / factor-score shapes do not agree");
    }
    return scores.U * Gamma.transpose();
}

Eigen::MatrixXd exp_prices(const Eigen::MatrixXd& log_prices) {
    Eigen::MatrixXd prices = log_prices.array().exp();
    if (!prices.allFinite()) {
        throw Error(ErrorCode::numeric, "price overflow");
    }
    return prices;
}

PriceDecomposition price_decomposition(const FilterOutput& output,
                                       const StateSpaceMatrices& matrices,
                                       const Eigen::MatrixXd& Gamma, const FactorScores& scores,
                                       FittedStateKind kind) {
    const Eigen::MatrixXd empty_gamma(matrices.D.size(), 0);
    PriceDecomposition decomp;
    decomp.ss_price =
        exp_prices(fitted_log_prices(output, matrices, empty_gamma, nullptr, kind));
    decomp.multiplier = exp_prices(functional_component(Gamma, scores));
    return decomp;
}

CoefficientCurve coefficient_curves(const Eigen::MatrixXd& Gamma, const KpcaModel& kpca_model) {
    if (Gamma.cols() != kpca_model.n_factors()) {
        throw Error(ErrorCode::domain, "Gamma column count does not match the kPCA factor count");
    }
    CoefficientCurve curve;
    curve.tenor_grid = kpca_model.tenors;
    curve.gamma_values = Gamma * kpca_model.basis.transpose();
    return curve;
}

std::vector<Regime> contango_indicator(const YieldPanel& yields, Tenor short_tenor,
                                       Tenor long_tenor) {
    yields.validate();
    auto find = [&](Tenor t) -> Eigen::Index {
        auto it = std::find(yields.tenors.begin(), yields.tenors.end(), t);
        if (it == yields.tenors.end()) {
            throw Error(ErrorCode::domain,
                        "tenor m" + std::to_string(t.months()) + " not present in the yield panel");
        }
        return static_cast<Eigen::Index>(it - yields.tenors.begin());
    };
    const Eigen::Index row_short = find(short_tenor);
    const Eigen::Index row_long = find(long_tenor);

    std::vector<Regime> regimes;
    const auto n = static_cast<Eigen::Index>(yields.dates.size());
    regimes.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index t = 0; t < n; ++t) {
        regimes.push_back(yields.yields(row_short, t) > yields.yields(row_long, t)
                              ? Regime::backwardation
                              : Regime::contango);
    }
    return regimes;
}

const char* regime_name(Regime regime) {
    return regime == Regime::contango ? "contango" : "backwardation";
}

}  // namespace ssfr
