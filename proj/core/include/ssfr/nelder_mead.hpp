// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>

namespace ssfr {

struct NelderMeadOptions {
    double tol = 1e-8;         // stop when the simplex function-value spread < tol
    int max_iter = 5000;       // total iteration budget, shared across restarts
    int n_restarts = 2;        // rebuild the simplex around the incumbent best
    double initial_step = 0.25;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double fval = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimizer (reflection 1, expansion 2, contraction
/// 0.5, shrink 0.5). After each convergence the simplex is re-seeded around
/// the best point with a halved step, which guards against premature collapse
/// on narrow valleys. Deterministic for a given starting point.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& options);

}  // namespace ssfr
