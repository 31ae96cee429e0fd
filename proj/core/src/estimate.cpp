// SPDX-License-Identifier: Apache-2.0
#include "ssfr/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ssfr/errors.hpp"
#include "ssfr/nelder_mead.hpp"
#include "ssfr/rng.hpp"

namespace ssfr {

ParamLayout ParamLayout::make(Eigen::Index P, int Q,
                              const std::optional<std::vector<int>>& sigma_groups) {
    if (P < 1) throw Error(ErrorCode::domain, "layout needs at least one tenor");
    if (Q < 0) throw Error(ErrorCode::domain, "factor count Q must be non-negative");
    ParamLayout layout;
    layout.P = P;
    layout.Q = Q;
    if (sigma_groups) {
        if (static_cast<Eigen::Index>(sigma_groups->size()) != P) {
            throw Error(ErrorCode::domain, "sigma tying map must have one entry per tenor");
        }
        const int g = *std::max_element(sigma_groups->begin(), sigma_groups->end()) + 1;
        std::vector<bool> seen(static_cast<std::size_t>(g), false);
        for (int id : *sigma_groups) {
            if (id < 0) throw Error(ErrorCode::domain, "sigma group ids must be non-negative");
            seen[static_cast<std::size_t>(id)] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            throw Error(ErrorCode::domain, "sigma group ids must be contiguous from 0");
        }
        layout.sigma_groups = *sigma_groups;
    } else {
        layout.sigma_groups.resize(static_cast<std::size_t>(P));
        for (Eigen::Index i = 0; i < P; ++i) layout.sigma_groups[static_cast<std::size_t>(i)] = static_cast<int>(i);
    }
    return layout;
}

int ParamLayout::n_groups() const {
    return sigma_groups.empty() ? 0
                                : *std::max_element(sigma_groups.begin(), sigma_groups.end()) + 1;
}

Eigen::Index ParamLayout::size() const { return 8 + n_groups() + P * Q; }

Eigen::VectorXd transform_params(const ModelParams& params, const ParamLayout& layout) {
    params.validate();
    if (params.n_tenors() != layout.P || params.Q != layout.Q) {
        throw Error(ErrorCode::domain, "parameter shapes do not match the layout");
    }
    Eigen::VectorXd z(layout.size());
    z(0) = std::log(params.kappa_xi);
    z(1) = std::log(params.kappa_chi - params.kappa_xi);
    z(2) = params.mu_xi;
    z(3) = std::log(params.sigma_chi);
    z(4) = std::log(params.sigma_xi);
    z(5) = std::atanh(params.rho);
    z(6) = params.lambda_chi;
    z(7) = params.lambda_xi;
    const int g = layout.n_groups();
    // A group's coordinate is taken from its first member tenor.
    for (int k = 0; k < g; ++k) {
        for (Eigen::Index i = 0; i < layout.P; ++i) {
            if (layout.sigma_groups[static_cast<std::size_t>(i)] == k) {
                z(8 + k) = std::log(params.meas_std(i));
                break;
            }
        }
    }
    Eigen::Index pos = 8 + g;
    for (Eigen::Index i = 0; i < layout.P; ++i) {
        for (int j = 0; j < layout.Q; ++j) z(pos++) = params.Gamma(i, j);
    }
    return z;
}

ModelParams inverse_transform(const Eigen::VectorXd& z, const ParamLayout& layout) {
    if (z.size() != layout.size()) {
        throw Error(ErrorCode::domain, "parameter vector has length " + std::to_string(z.size()) +
                                           ", layout expects " + std::to_string(layout.size()));
    }
    if (!z.allFinite()) {
        throw Error(ErrorCode::domain, "parameter vector must be finite");
    }
    ModelParams p;
    p.kappa_xi = std::exp(z(0));
    p.kappa_chi = p.kappa_xi + std::exp(z(1));
    p.mu_xi = z(2);
    p.sigma_chi = std::exp(z(3));
    p.sigma_xi = std::exp(z(4));
    p.rho = std::tanh(z(5));
    p.lambda_chi = z(6);
    p.lambda_xi = z(7);
    const int g = layout.n_groups();
    p.meas_std.resize(layout.P);
    for (Eigen::Index i = 0; i < layout.P; ++i) {
        p.meas_std(i) = std::exp(z(8 + layout.sigma_groups[static_cast<std::size_t>(i)]));
    }
    p.Q = layout.Q;
    p.Gamma.resize(layout.P, layout.Q);
    Eigen::Index pos = 8 + g;
    for (Eigen::Index i = 0; i < layout.P; ++i) {
        for (int j = 0; j < layout.Q; ++j) p.Gamma(i, j) = z(pos++);
    }
    p.validate();
    return p;
}

namespace {

ModelParams heuristic_start(const ParamLayout& layout) {
    ModelParams p;
    p.kappa_chi = 1.5;
    p.kappa_xi = 0.1;
    p.mu_xi = 0.0;
    p.sigma_chi = 0.3;
    p.sigma_xi = 0.3;
    p.rho = 0.0;
    p.lambda_chi = 0.0;
    p.lambda_xi = 0.0;
    p.meas_std = Eigen::VectorXd::Constant(layout.P, 0.05);
    p.Q = layout.Q;
    p.Gamma = Eigen::MatrixXd::Zero(layout.P, layout.Q);
    return p;
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

}  // namespace

FitResult fit_mle(const AlignedDataset& dataset, const FactorScores* scores,
                  const FitConfig& config) {
    if (config.n_starts < 1) {
        throw Error(ErrorCode::domain, "need at least one optimizer start");
    }
    if ((config.Q > 0) != (scores != nullptr)) {
        throw Error(ErrorCode::domain, "factor scores must be supplied exactly when Q > 0");
    }
    dataset.futures.validate();
    const ParamLayout layout =
        ParamLayout::make(static_cast<Eigen::Index>(dataset.futures.tenors.size()), config.Q,
                          config.sigma_groups);
    const FilterConfig filter_config =
        config.filter ? *config.filter : default_filter_config(dataset.futures);

    constexpr double kInfeasiblePenalty = 1e10;
    auto objective = [&](const Eigen::VectorXd& zv) -> double {
        ModelParams candidate;
        try {
            candidate = inverse_transform(zv, layout);
        } catch (const Error&) {
            return kInfeasiblePenalty;
        }
        const double ll = filter_loglik(dataset, candidate, scores, filter_config);
        if (!std::isfinite(ll)) return kInfeasiblePenalty;
        return -ll;
    };

    const ModelParams start_params = config.init ? *config.init : heuristic_start(layout);
    const Eigen::VectorXd z0 = transform_params(start_params, layout);

    NelderMeadOptions nm;
    nm.tol = config.tol;
    nm.max_iter = config.max_iter;

    // Only the log coordinates (rates, volatilities, measurement stds) are
    // dispersed; Gamma, rho and the drifts stay at the nested starting values.
    std::vector<Eigen::Index> dispersed = {0, 1, 3, 4};
    for (int k = 0; k < layout.n_groups(); ++k) dispersed.push_back(8 + k);

    FitResult result;
    result.n_starts = config.n_starts;
    bool have_best = false;
    double best_f = kInfeasiblePenalty;
    Eigen::VectorXd best_z;

    for (int k = 0; k < config.n_starts; ++k) {
        Eigen::VectorXd z_start = z0;
        if (k > 0) {
            auto engine = make_engine(config.seed, "fit_start", static_cast<std::uint64_t>(k));
            std::normal_distribution<double> jitter(0.0, 0.5);
            for (Eigen::Index idx : dispersed) z_start(idx) += jitter(engine);
        }
        NelderMeadResult nm_result = nelder_mead(objective, z_start, nm);

        StartTrace trace;
        trace.start_point = z_start;
        trace.loglik = -nm_result.fval;
        trace.iterations = nm_result.iterations;
        trace.converged = nm_result.converged;
        result.trace.push_back(std::move(trace));

        if (nm_result.fval >= kInfeasiblePenalty) continue;
        const bool better = !have_best || nm_result.fval < best_f ||
                            (nm_result.fval == best_f && lex_less(nm_result.x, best_z));
        if (better) {
            have_best = true;
            best_f = nm_result.fval;
            best_z = nm_result.x;
            result.converged = nm_result.converged;
        }
    }

    if (!have_best) {
        throw Error(ErrorCode::numeric, "every optimizer start was infeasible");
    }
    result.params = inverse_transform(best_z, layout);
    result.loglik = -best_f;
    return result;
}

}  // namespace ssfr
