// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "ssfr/dates.hpp"
#include "ssfr/tenor.hpp"

namespace ssfr {

/// Log futures prices on a monthly calendar. Rows are dates, columns are
/// constant-maturity tenors; entries are natural logs of USD prices.
struct FuturesPanel {
    std::vector<MonthStamp> dates;  // strictly increasing, N
    std::vector<Tenor> tenors;      // strictly increasing, P
    Eigen::MatrixXd log_prices;     // N x P, all finite

    Eigen::Index n_dates() const { return log_prices.rows(); }
    Eigen::Index n_tenors() const { return log_prices.cols(); }

    /// Throws on broken invariants (shape mismatch, unsorted axes, non-finite).
    void validate() const;
};

/// Annualized Treasury yields as decimal fractions. Row i is the full time
/// series of the yield at tenor i (M x N layout, dates along columns).
struct YieldPanel {
    std::vector<MonthStamp> dates;  // strictly increasing, N
    std::vector<Tenor> tenors;      // strictly increasing, M
    Eigen::MatrixXd yields;         // M x N, all finite

    Eigen::Index n_dates() const { return yields.cols(); }
    Eigen::Index n_tenors() const { return yields.rows(); }

    /// Time series of the yield at one tenor (row as a column vector).
    Eigen::VectorXd tenor_series(Eigen::Index i) const { return yields.row(i).transpose(); }

    /// Curve observed on one date (column).
    Eigen::VectorXd curve_at(Eigen::Index t) const { return yields.col(t); }

    void validate() const;
};

/// Futures and yields restricted to a common, ordered set of dates.
struct AlignedDataset {
    FuturesPanel futures;
    YieldPanel yields;
    double dt = 1.0 / 12.0;  // year fraction between consecutive dates

    Eigen::Index n_dates() const { return futures.n_dates(); }
};

/// Restricts both panels to the intersection of their date sets, in order.
/// Throws when the intersection is empty.
AlignedDataset align_panels(const FuturesPanel& futures, const YieldPanel& yields);

}  // namespace ssfr
