// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "ssfr/kalman.hpp"
#include "ssfr/model.hpp"

namespace ssfr {

/// Shape of the unconstrained parameter vector. Coordinates, in order:
/// log(kappa_xi), log(kappa_chi - kappa_xi), mu_xi, log(sigma_chi),
/// log(sigma_xi), atanh(rho), lambda_chi, lambda_xi, one log(meas_std) per
/// tying group, then Gamma row by row. The kappa encoding keeps
/// kappa_chi > kappa_xi > 0 for every finite vector.
struct ParamLayout {
    Eigen::Index P = 0;
    int Q = 0;
    std::vector<int> sigma_groups;  // length P, group ids 0..G-1; identity = untied

    static ParamLayout make(Eigen::Index P, int Q,
                            const std::optional<std::vector<int>>& sigma_groups = std::nullopt);

    int n_groups() const;
    Eigen::Index size() const;
};

Eigen::VectorXd transform_params(const ModelParams& params, const ParamLayout& layout);
ModelParams inverse_transform(const Eigen::VectorXd& z, const ParamLayout& layout);

struct FitConfig {
    int Q = 0;
    int n_starts = 8;
    std::uint64_t seed = 0;
    int max_iter = 5000;
    double tol = 1e-8;
    std::optional<std::vector<int>> sigma_groups;  // measurement-std tying map
    std::optional<ModelParams> init;               // replaces the heuristic start
    std::optional<FilterConfig> filter;            // default: derived from the data
};

struct StartTrace {
    Eigen::VectorXd start_point;  // unconstrained coordinates
    double loglik = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct FitResult {
    ModelParams params;
    double loglik = 0.0;
    int n_starts = 0;
    bool converged = false;
    std::vector<StartTrace> trace;
};

/// Maximum-likelihood fit via multi-start Nelder-Mead on the negative
/// log-likelihood in unconstrained coordinates. Start 0 is the heuristic (or
/// supplied) point; the others perturb its positive parameters by
/// lognormal(0, 0.5^2) factors, seeded so the k-th start never depends on
/// n_starts. Infeasible likelihood evaluations cost a large penalty instead
/// of aborting. Throws Error(numeric) if every start is infeasible.
FitResult fit_mle(const AlignedDataset& dataset, const FactorScores* scores,
                  const FitConfig& config);

}  // namespace ssfr
