// Micro-benchmarks for the hot paths: the filter recursion (drives every
// optimizer iteration), kernel-PCA fitting, the measurement intercept, and
// the simulator.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "ssfr/analysis.hpp"
#include "ssfr/kalman.hpp"
#include "ssfr/kpca.hpp"
#include "ssfr/model.hpp"
#include "ssfr/rng.hpp"

using namespace ssfr;

namespace {

ModelParams bench_params(Eigen::Index p, int q) {
    ModelParams params;
    params.kappa_chi = 1.3;
    params.kappa_xi = 0.25;
    params.mu_xi = 0.03;
    params.sigma_chi = 0.3;
    params.sigma_xi = 0.12;
    params.rho = -0.3;
    params.lambda_chi = 0.02;
    params.lambda_xi = -0.01;
    params.meas_std = Eigen::VectorXd::Constant(p, 0.02);
    params.Q = q;
    params.Gamma = Eigen::MatrixXd::Constant(p, q, 0.1);
    return params;
}

std::vector<Tenor> bench_tenors() {
    return {Tenor(1), Tenor(3), Tenor(6), Tenor(9), Tenor(12)};
}

YieldPanel bench_yields(int n_dates) {
    YieldPanel panel;
    panel.tenors = bench_tenors();
    panel.yields.resize(5, n_dates);
    auto engine = make_engine(3, "bench_yields");
    std::normal_distribution<double> noise(0.0, 0.002);
    for (int t = 0; t < n_dates; ++t) {
        panel.dates.push_back(MonthStamp(2000, 1).plus_months(t));
        for (Eigen::Index i = 0; i < 5; ++i) {
            const double tau = panel.tenors[static_cast<std::size_t>(i)].years();
            panel.yields(i, t) =
                0.02 + 0.01 * tau + 0.004 * std::sin(0.3 * t + 2.0 * tau) + noise(engine);
        }
    }
    return panel;
}

struct FilterFixture {
    AlignedDataset data;
    ModelParams params;
    FactorScores scores;
    FilterConfig config;

    explicit FilterFixture(int n_dates) {
        params = bench_params(5, 2);
        data.yields = bench_yields(n_dates);
        const KpcaModel kpca = fit_kpca(data.yields, KernelSpec{}, 2);
        scores = factor_scores(kpca, data.yields);
        data.futures = simulate(params, bench_tenors(), n_dates, 1.0 / 12.0, scores.U, 7,
                                data.yields.dates.front())
                           .panel;
        config = default_filter_config(data.futures);
    }
};

void bm_filter_loglik(benchmark::State& state) {
    const FilterFixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(filter_loglik(fx.data, fx.params, &fx.scores, fx.config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_filter_loglik)->Arg(120)->Arg(480)->Arg(2000);

void bm_run_filter(benchmark::State& state) {
    const FilterFixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_filter(fx.data, fx.params, &fx.scores, fx.config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_run_filter)->Arg(120)->Arg(480);

void bm_fit_kpca(benchmark::State& state) {
    const YieldPanel yields = bench_yields(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_kpca(yields, KernelSpec{}, 2));
    }
}
BENCHMARK(bm_fit_kpca)->Arg(120)->Arg(480);

void bm_factor_scores(benchmark::State& state) {
    const YieldPanel yields = bench_yields(static_cast<int>(state.range(0)));
    const KpcaModel model = fit_kpca(yields, KernelSpec{}, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(factor_scores(model, yields));
    }
}
BENCHMARK(bm_factor_scores)->Arg(120)->Arg(480);

void bm_a_function(benchmark::State& state) {
    const ModelParams params = bench_params(5, 0);
    double tau = 0.05;
    for (auto _ : state) {
        benchmark::DoNotOptimize(a_function(params, tau));
        tau = tau < 10.0 ? tau + 0.1 : 0.05;
    }
}
BENCHMARK(bm_a_function);

void bm_simulate(benchmark::State& state) {
    const ModelParams params = bench_params(5, 0);
    const auto tenors = bench_tenors();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(params, tenors, n, 1.0 / 12.0, std::nullopt, 11));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_simulate)->Arg(120)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
