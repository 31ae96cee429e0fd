// SPDX-License-Identifier: Apache-2.0
#include "ssfr/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ssfr/errors.hpp"

namespace ssfr {

void KernelSpec::validate() const {
    if (kind == KernelKind::rbf && bandwidth && !(*bandwidth > 0.0))
        throw Error(ErrorCode::domain, "rbf bandwidth must be positive");
}

double kernel_value(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const KernelSpec& spec) {
    if (x.size() != y.size())
        throw Error(ErrorCode::domain, "kernel arguments have different lengths");
    spec.validate();
    switch (spec.kind) {
        case KernelKind::linear:
            return x.dot(y);
        case KernelKind::rbf: {
            if (!spec.bandwidth)
                throw Error(ErrorCode::domain, "rbf kernel requires a resolved bandwidth");
            const double sigma = *spec.bandwidth;
            return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
        }
    }
    throw Error(ErrorCode::domain, "unknown kernel kind");
}

double median_bandwidth(const std::vector<Eigen::VectorXd>& rows) {
    if (rows.size() < 2)
        throw Error(ErrorCode::domain, "median bandwidth needs at least two rows");
    std::vector<double> dists;
    dists.reserve(rows.size() * (rows.size() - 1) / 2);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (rows[i].size() != rows[j].size())
                throw Error(ErrorCode::domain, "rows have different lengths");
            dists.push_back((rows[i] - rows[j]).norm());
        }
    // Lower median: element (n-1)/2 of the sorted distances.
    const auto mid = dists.begin() + static_cast<std::ptrdiff_t>((dists.size() - 1) / 2);
    std::nth_element(dists.begin(), mid, dists.end());
    const double median = *mid;
    if (!(median > 0.0))
        throw Error(ErrorCode::domain, "degenerate bandwidth: median pairwise distance is zero");
    return median;
}

}  // namespace ssfr
