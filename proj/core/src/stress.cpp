// SPDX-License-Identifier: Apache-2.0
#include "ssfr/stress.hpp"

#include <cmath>

#include "ssfr/analysis.hpp"
#include "ssfr/errors.hpp"
#include "ssfr/kpca.hpp"

namespace ssfr {

void ShockScenario::validate() const {
    if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
        throw Error(ErrorCode::domain, "shock multiplier must be positive and finite");
    }
    if (kind == ShockKind::temporary) {
        if (!end) {
            throw Error(ErrorCode::domain, "temporary shock needs an end month");
        }
        if (*end < start) {
            throw Error(ErrorCode::domain, "shock end month precedes its start");
        }
    } else if (end) {
        throw Error(ErrorCode::domain, "permanent shock must not carry an end month");
    }
}

YieldPanel apply_shock(const YieldPanel& yields, const ShockScenario& scenario) {
    scenario.validate();
    yields.validate();
    if (scenario.start > yields.dates.back()) {
        throw Error(ErrorCode::domain, "shock starts after the yield panel ends");
    }
    YieldPanel shocked = yields;
    const auto n = static_cast<Eigen::Index>(yields.dates.size());
    for (Eigen::Index t = 0; t < n; ++t) {
        const MonthStamp& d = yields.dates[static_cast<std::size_t>(t)];
        const bool hit = scenario.kind == ShockKind::permanent
                             ? !(d < scenario.start)
                             : !(d < scenario.start) && !(*scenario.end < d);
        if (hit) shocked.yields.col(t) *= scenario.multiplier;
    }
    return shocked;
}

namespace {

Eigen::MatrixXd pipeline_prices(const AlignedDataset& dataset, const YieldPanel& yields,
                                const ModelParams& params, const KernelSpec& spec,
                                const KpcaModel* frozen, const FilterConfig& filter_config) {
    FactorScores scores;
    if (frozen) {
        scores = factor_scores(*frozen, yields);
    } else {
        const KpcaModel model = fit_kpca(yields, spec, params.Q);
        scores = factor_scores(model, yields);
    }
    const FilterOutput output = run_filter(dataset, params, &scores, filter_config);
    const StateSpaceMatrices matrices = state_space(params, dataset.futures.tenors, dataset.dt);
    return exp_prices(fitted_log_prices(output, matrices, params.Gamma, &scores));
}

}  // namespace

StressRun stress_run(const AlignedDataset& dataset, const ModelParams& fitted_params,
                     const KernelSpec& kpca_spec, const ShockScenario& scenario,
                     const StressOptions& options) {
    fitted_params.validate();
    if (fitted_params.Q < 1) {
        throw Error(ErrorCode::domain, "stress pipeline needs a functional model (Q > 0)");
    }
    const YieldPanel shocked = apply_shock(dataset.yields, scenario);
    const FilterConfig filter_config =
        options.filter ? *options.filter : default_filter_config(dataset.futures);

    StressRun run;
    if (options.freeze_kpca) {
        const KpcaModel base_model = fit_kpca(dataset.yields, kpca_spec, fitted_params.Q);
        run.base_prices = pipeline_prices(dataset, dataset.yields, fitted_params, kpca_spec,
                                          &base_model, filter_config);
        run.shocked_prices =
            pipeline_prices(dataset, shocked, fitted_params, kpca_spec, &base_model, filter_config);
    } else {
        run.base_prices = pipeline_prices(dataset, dataset.yields, fitted_params, kpca_spec,
                                          nullptr, filter_config);
        run.shocked_prices =
            pipeline_prices(dataset, shocked, fitted_params, kpca_spec, nullptr, filter_config);
    }
    return run;
}

std::vector<TenorBucket> default_buckets() {
    return {{0, 4, "0-4"}, {4, 8, "4-8"}, {8, 12, "8-12"}};
}

StressReport bucket_report(const Eigen::MatrixXd& base, const Eigen::MatrixXd& shocked,
                           const std::vector<MonthStamp>& dates,
                           const std::vector<Tenor>& tenors,
                           const std::vector<TenorBucket>& buckets) {
    const Eigen::Index n = base.rows();
    const auto p = static_cast<Eigen::Index>(tenors.size());
    if (shocked.rows() != n || shocked.cols() != base.cols() || base.cols() != p ||
        static_cast<Eigen::Index>(dates.size()) != n) {
        throw Error(ErrorCode::domain, "price matrices, dates and tenors must agree in shape");
    }
    if (buckets.empty()) {
        throw Error(ErrorCode::domain, "no tenor buckets given");
    }

    std::vector<std::vector<Eigen::Index>> members(buckets.size());
    for (Eigen::Index i = 0; i < p; ++i) {
        int hits = 0;
        for (std::size_t b = 0; b < buckets.size(); ++b) {
            if (buckets[b].contains(tenors[static_cast<std::size_t>(i)])) {
                members[b].push_back(i);
                ++hits;
            }
        }
        if (hits != 1) {
            throw Error(ErrorCode::domain, "tenor m" +
                                               std::to_string(tenors[static_cast<std::size_t>(i)].months()) +
                                               " must fall in exactly one bucket");
        }
    }
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        if (members[b].empty()) {
            throw Error(ErrorCode::domain, "bucket " + buckets[b].label + " has no tenors");
        }
    }

    const auto n_buckets = static_cast<Eigen::Index>(buckets.size());
    StressReport report;
    report.dates = dates;
    report.buckets = buckets;
    report.mean_diff.resize(n, n_buckets);
    report.ci_low.resize(n, n_buckets);
    report.ci_high.resize(n, n_buckets);

    const Eigen::MatrixXd diff = shocked - base;
    for (Eigen::Index b = 0; b < n_buckets; ++b) {
        const auto& idx = members[static_cast<std::size_t>(b)];
        const auto m = static_cast<double>(idx.size());
        for (Eigen::Index t = 0; t < n; ++t) {
            double sum = 0.0;
            for (Eigen::Index i : idx) sum += diff(t, i);
            const double mean = sum / m;
            double ss = 0.0;
            for (Eigen::Index i : idx) {
                const double d = diff(t, i) - mean;
                ss += d * d;
            }
            const double sd = idx.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
            const double half_width = 1.96 * sd / std::sqrt(m);
            report.mean_diff(t, b) = mean;
            report.ci_low(t, b) = mean - half_width;
            report.ci_high(t, b) = mean + half_width;
        }
    }
    return report;
}

}  // namespace ssfr
