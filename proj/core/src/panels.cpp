// SPDX-License-Identifier: Apache-2.0
#include "ssfr/panels.hpp"

#include <algorithm>
#include <cmath>

#include "ssfr/errors.hpp"

namespace ssfr {

namespace {

void check_axis_sorted(const std::vector<MonthStamp>& dates) {
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw Error(ErrorCode::domain, "panel dates must be strictly increasing");
}

void check_tenors_sorted(const std::vector<Tenor>& tenors) {
    for (std::size_t i = 1; i < tenors.size(); ++i)
        if (!(tenors[i - 1] < tenors[i]))
            throw Error(ErrorCode::domain, "panel tenors must be strictly increasing");
}

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite())
        throw Error(ErrorCode::domain, std::string("non-finite entry in ") + what);
}

}  // namespace

void FuturesPanel::validate() const {
    if (static_cast<Eigen::Index>(dates.size()) != log_prices.rows() ||
        static_cast<Eigen::Index>(tenors.size()) != log_prices.cols())
        throw Error(ErrorCode::domain, "futures panel shape mismatch");
    check_axis_sorted(dates);
    check_tenors_sorted(tenors);
    check_finite(log_prices, "futures panel");
}

void YieldPanel::validate() const {
    if (static_cast<Eigen::Index>(dates.size()) != yields.cols() ||
        static_cast<Eigen::Index>(tenors.size()) != yields.rows())
        throw Error(ErrorCode::domain, "yield panel shape mismatch");
    check_axis_sorted(dates);
    check_tenors_sorted(tenors);
    check_finite(yields, "yield panel");
}

AlignedDataset align_panels(const FuturesPanel& futures, const YieldPanel& yields) {
    futures.validate();
    yields.validate();
    if (futures.dates.empty() || yields.dates.empty())
        throw Error(ErrorCode::domain, "cannot align an empty panel");

    std::vector<MonthStamp> common;
    std::set_intersection(futures.dates.begin(), futures.dates.end(), yields.dates.begin(),
                          yields.dates.end(), std::back_inserter(common));
    if (common.empty())
        throw Error(ErrorCode::domain, "no overlapping dates between futures and yields");

    const auto n = static_cast<Eigen::Index>(common.size());

    FuturesPanel f_out;
    f_out.tenors = futures.tenors;
    f_out.dates = common;
    f_out.log_prices.resize(n, futures.n_tenors());

    YieldPanel y_out;
    y_out.tenors = yields.tenors;
    y_out.dates = common;
    y_out.yields.resize(yields.n_tenors(), n);

    std::size_t fi = 0, yi = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        while (futures.dates[fi] != common[static_cast<std::size_t>(k)]) ++fi;
        while (yields.dates[yi] != common[static_cast<std::size_t>(k)]) ++yi;
        f_out.log_prices.row(k) = futures.log_prices.row(static_cast<Eigen::Index>(fi));
        y_out.yields.col(k) = yields.yields.col(static_cast<Eigen::Index>(yi));
    }

    return AlignedDataset{std::move(f_out), std::move(y_out), 1.0 / 12.0};
}

}  // namespace ssfr
