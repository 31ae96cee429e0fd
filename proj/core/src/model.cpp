// SPDX-License-Identifier: Apache-2.0
#include "ssfr/model.hpp"

#include <cmath>
#include <string>

#include "ssfr/errors.hpp"

namespace ssfr {

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::domain, what); };
    if (!std::isfinite(kappa_chi) || !std::isfinite(kappa_xi) || !std::isfinite(mu_xi) ||
        !std::isfinite(sigma_chi) || !std::isfinite(sigma_xi) || !std::isfinite(rho) ||
        !std::isfinite(lambda_chi) || !std::isfinite(lambda_xi)) {
        fail("model parameters must be finite");
    }
    if (!(kappa_xi > 0.0) || !(kappa_chi > kappa_xi)) {
        fail("mean-reversion speeds must satisfy kappa_chi > kappa_xi > 0");
    }
    if (!(sigma_chi > 0.0) || !(sigma_xi > 0.0)) fail("volatilities must be positive");
    if (!(std::abs(rho) < 1.0)) fail("correlation must lie in (-1, 1)");
    if (meas_std.size() < 1) fail("meas_std must have at least one entry");
    if (!meas_std.allFinite() || (meas_std.array() <= 0.0).any()) {
        fail("measurement stds must be positive and finite");
    }
    if (Q < 0) fail("factor count Q must be non-negative");
    // A model without functional factors may carry an empty Gamma; readers
    // normalise it to P x 0 where a concrete shape matters.
    const bool empty_ok = (Q == 0 && Gamma.size() == 0);
    if (!empty_ok && (Gamma.rows() != meas_std.size() || Gamma.cols() != Q)) {
        fail("Gamma must be " + std::to_string(meas_std.size()) + " x " + std::to_string(Q));
    }
    if (Q > 0 && !Gamma.allFinite()) fail("Gamma entries must be finite");
}

double a_function(const ModelParams& params, double tau_years) {
    if (!(tau_years >= 0.0)) {
        throw Error(ErrorCode::domain, "tenor must be non-negative");
    }
    const double kc = params.kappa_chi;
    const double kx = params.kappa_xi;
    const double risk_premia = -params.lambda_chi / kc * (1.0 - std::exp(-kc * tau_years)) +
                               (params.mu_xi - params.lambda_xi) / kx *
                                   (1.0 - std::exp(-kx * tau_years));
    const double log_var =
        (1.0 - std::exp(-2.0 * kc * tau_years)) / (2.0 * kc) * params.sigma_chi * params.sigma_chi +
        (1.0 - std::exp(-2.0 * kx * tau_years)) / (2.0 * kx) * params.sigma_xi * params.sigma_xi +
        2.0 * (1.0 - std::exp(-(kc + kx) * tau_years)) / (kc + kx) * params.sigma_chi *
            params.sigma_xi * params.rho;
    return risk_premia + 0.5 * log_var;
}

Transition state_transition(const ModelParams& params, double dt) {
    if (!(dt > 0.0)) {
        throw Error(ErrorCode::domain, "time step must be positive");
    }
    const double kc = params.kappa_chi;
    const double kx = params.kappa_xi;
    Transition t;
    t.C << 0.0, params.mu_xi / kx * (1.0 - std::exp(-kx * dt));
    t.E << std::exp(-kc * dt), 0.0, 0.0, std::exp(-kx * dt);
    const double v11 = (1.0 - std::exp(-2.0 * kc * dt)) / (2.0 * kc) * params.sigma_chi * params.sigma_chi;
    const double v22 = (1.0 - std::exp(-2.0 * kx * dt)) / (2.0 * kx) * params.sigma_xi * params.sigma_xi;
    const double v12 = (1.0 - std::exp(-(kc + kx) * dt)) / (kc + kx) * params.sigma_chi *
                       params.sigma_xi * params.rho;
    t.Sigma_v << v11, v12, v12, v22;
    return t;
}

Measurement measurement(const ModelParams& params, std::span<const double> tenor_years) {
    const auto p = static_cast<Eigen::Index>(tenor_years.size());
    if (p != params.meas_std.size()) {
        throw Error(ErrorCode::domain, "tenor grid length does not match meas_std length");
    }
    for (std::size_t i = 0; i < tenor_years.size(); ++i) {
        if (!(tenor_years[i] >= 0.0)) {
            throw Error(ErrorCode::domain, "tenors must be non-negative");
        }
        if (i > 0 && !(tenor_years[i] > tenor_years[i - 1])) {
            throw Error(ErrorCode::domain, "tenors must be strictly increasing");
        }
    }
    Measurement m;
    m.D.resize(p);
    m.F.resize(p, 2);
    for (Eigen::Index i = 0; i < p; ++i) {
        const double tau = tenor_years[static_cast<std::size_t>(i)];
        m.D(i) = a_function(params, tau);
        m.F(i, 0) = std::exp(-params.kappa_chi * tau);
        m.F(i, 1) = std::exp(-params.kappa_xi * tau);
    }
    m.Sigma_w = params.meas_std.array().square();
    return m;
}

std::vector<double> tenor_years(const std::vector<Tenor>& tenors) {
    std::vector<double> out;
    out.reserve(tenors.size());
    for (const Tenor& t : tenors) out.push_back(t.years());
    return out;
}

Measurement measurement(const ModelParams& params, const std::vector<Tenor>& tenors) {
    return measurement(params, std::span<const double>(tenor_years(tenors)));
}

StateSpaceMatrices state_space(const ModelParams& params, std::span<const double> tenor_years,
                               double dt) {
    const Transition t = state_transition(params, dt);
    Measurement m = measurement(params, tenor_years);
    StateSpaceMatrices s;
    s.C = t.C;
    s.E = t.E;
    s.Sigma_v = t.Sigma_v;
    s.D = std::move(m.D);
    s.F = std::move(m.F);
    s.Sigma_w = std::move(m.Sigma_w);
    return s;
}

StateSpaceMatrices state_space(const ModelParams& params, const std::vector<Tenor>& tenors,
                               double dt) {
    return state_space(params, std::span<const double>(tenor_years(tenors)), dt);
}

Eigen::VectorXd fr_measurement_mean(const StateSpaceMatrices& matrices, const StateVector& state,
                                    const Eigen::MatrixXd& Gamma, const Eigen::VectorXd& u_t) {
    const Eigen::Index p = matrices.D.size();
    if (matrices.F.rows() != p || matrices.F.cols() != 2) {
        throw Error(ErrorCode::domain, "measurement matrix F must be P x 2");
    }
    if (Gamma.rows() != p || Gamma.cols() != u_t.size()) {
        throw Error(ErrorCode::domain, "Gamma / factor-score shapes do not agree");
    }
    Eigen::Vector2d x(state.chi, state.xi);
    Eigen::VectorXd mean = matrices.D + matrices.F * x;
    if (u_t.size() > 0) mean += Gamma * u_t;
    return mean;
}

}  // namespace ssfr
