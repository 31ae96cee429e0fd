// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <optional>

namespace ssfr {

enum class KernelKind { rbf, linear };

/// Kernel choice for factor extraction. The linear kind exists so kernel-PCA
/// results can be cross-checked against classical PCA; rbf is the production
/// kernel. An unset bandwidth means "resolve with the median heuristic at
/// fit time".
struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    std::optional<double> bandwidth;  // sigma; required > 0 for rbf once resolved

    void validate() const;
};

/// k(x, y). rbf: exp(-||x-y||^2 / (2 sigma^2)), in (0, 1]. linear: dot product.
/// The KernelSpec bandwidth must be resolved (non-null for rbf).
double kernel_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const KernelSpec& spec);

/// Lower median of the M(M-1)/2 pairwise Euclidean distances between rows.
/// Throws when the median is not strictly positive (degenerate data).
double median_bandwidth(const std::vector<Eigen::VectorXd>& rows);

}  // namespace ssfr
