// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "ssfr/kalman.hpp"
#include "ssfr/kernel.hpp"
#include "ssfr/model.hpp"
#include "ssfr/panels.hpp"

namespace ssfr {

enum class ShockKind { temporary, permanent };

/// Multiplicative yield shock. Temporary shocks hit dates in [start, end];
/// permanent shocks hit every date >= start.
struct ShockScenario {
    ShockKind kind = ShockKind::permanent;
    MonthStamp start;
    std::optional<MonthStamp> end;  // required iff temporary
    double multiplier = 1.0;

    void validate() const;
};

/// Scales the yields of every date inside the scenario window, leaving other
/// dates untouched. Throws if the shock starts after the panel ends.
YieldPanel apply_shock(const YieldPanel& yields, const ShockScenario& scenario);

struct StressOptions {
    // Keep the kernel-PCA model fitted on the unshocked yields and only
    // re-integrate the shocked curves against its basis. Default re-runs the
    // full kPCA fit (bandwidth included) on the shocked panel.
    bool freeze_kpca = false;
    std::optional<FilterConfig> filter;
};

struct StressRun {
    Eigen::MatrixXd base_prices;     // N x P, USD
    Eigen::MatrixXd shocked_prices;  // N x P, USD
};

/// Shock -> kPCA -> factor scores -> filter -> USD prices, with the model
/// parameters frozen at their fitted values. The base side runs the same
/// pipeline on the unshocked yields. Requires fitted_params.Q > 0.
StressRun stress_run(const AlignedDataset& dataset, const ModelParams& fitted_params,
                     const KernelSpec& kpca_spec, const ShockScenario& scenario,
                     const StressOptions& options = {});

/// Half-open months range (lo, hi].
struct TenorBucket {
    int lo_months = 0;
    int hi_months = 0;
    std::string label;

    bool contains(Tenor t) const { return t.months() > lo_months && t.months() <= hi_months; }
};

/// (0,4], (4,8], (8,12] months, labeled 0-4 / 4-8 / 8-12.
std::vector<TenorBucket> default_buckets();

struct StressReport {
    std::vector<MonthStamp> dates;
    std::vector<TenorBucket> buckets;
    Eigen::MatrixXd mean_diff;  // N x B, USD
    Eigen::MatrixXd ci_low;    // 95% normal-approximation band across the
    Eigen::MatrixXd ci_high;   // bucket's contracts at each date
};

/// Per-date cross-sectional summary of shocked - base price differences, one
/// column per bucket. The buckets must cover every tenor exactly once.
StressReport bucket_report(const Eigen::MatrixXd& base, const Eigen::MatrixXd& shocked,
                           const std::vector<MonthStamp>& dates,
                           const std::vector<Tenor>& tenors,
                           const std::vector<TenorBucket>& buckets = default_buckets());

}  // namespace ssfr
