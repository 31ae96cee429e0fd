// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Cholesky>
#include <random>
#include <string>

#include "ssfr/errors.hpp"
#include "ssfr/model.hpp"
#include "ssfr/rng.hpp"

namespace ssfr {

SimulationResult simulate(const ModelParams& params, const std::vector<Tenor>& tenors,
                          int n_steps, double dt,
                          const std::optional<Eigen::MatrixXd>& u_series, std::uint64_t seed,
                          MonthStamp start, StateVector x0) {
    params.validate();
    if (n_steps < 1) {
        throw Error(ErrorCode::domain, "simulation needs at least one step");
    }
    if (params.Q > 0) {
        if (!u_series) {
            throw Error(ErrorCode::domain, "factor scores required when Q > 0");
        }
        if (u_series->rows() != n_steps || u_series->cols() != params.Q) {
            throw Error(ErrorCode::domain, "factor-score series must be " +
                                               std::to_string(n_steps) + " x " +
                                               std::to_string(params.Q));
        }
    }

    const StateSpaceMatrices ss = state_space(params, tenors, dt);
    Eigen::LLT<Eigen::Matrix2d> chol(ss.Sigma_v);
    if (chol.info() != Eigen::Success) {
        throw Error(ErrorCode::numeric, "transition covariance is not positive definite");
    }
    const Eigen::Matrix2d L = chol.matrixL();
    const Eigen::VectorXd meas_scale = ss.Sigma_w.cwiseSqrt();
    const auto p = static_cast<Eigen::Index>(tenors.size());

    auto engine = make_engine(seed, "simulate");
    std::normal_distribution<double> gauss(0.0, 1.0);

    SimulationResult out;
    out.states.reserve(static_cast<std::size_t>(n_steps));
    out.panel.tenors = tenors;
    out.panel.dates.reserve(static_cast<std::size_t>(n_steps));
    out.panel.log_prices.resize(n_steps, p);

    Eigen::Vector2d x(x0.chi, x0.xi);
    for (int t = 0; t < n_steps; ++t) {
        Eigen::Vector2d z(gauss(engine), gauss(engine));
        x = ss.C + ss.E * x + L * z;
        out.states.push_back(StateVector{x(0), x(1)});
        out.panel.dates.push_back(start.plus_months(t));

        Eigen::VectorXd y = ss.D + ss.F * x;
        if (params.Q > 0) y += params.Gamma * u_series->row(t).transpose();
        for (Eigen::Index i = 0; i < p; ++i) y(i) += meas_scale(i) * gauss(engine);
        out.panel.log_prices.row(t) = y.transpose();
    }
    out.panel.validate();
    return out;
}

}  // namespace ssfr
