#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "ssfr/errors.hpp"
#include "ssfr/kpca.hpp"
#include "ssfr/stress.hpp"

using namespace ssfr;
using doctest::Contains;

namespace {

ShockScenario permanent_shock(const char* start, double multiplier) {
    ShockScenario s;
    s.kind = ShockKind::permanent;
    s.start = MonthStamp::parse(start);
    s.multiplier = multiplier;
    return s;
}

ShockScenario temporary_shock(const char* start, const char* end, double multiplier) {
    ShockScenario s;
    s.kind = ShockKind::temporary;
    s.start = MonthStamp::parse(start);
    s.end = MonthStamp::parse(end);
    s.multiplier = multiplier;
    return s;
}

// Synthetic futures/yield panels on a shared monthly calendar plus a plausible
// functional parameter set; the stress pipeline treats the parameters as
// already fitted.
struct StressFixture {
    ModelParams params;
    AlignedDataset data;

    explicit StressFixture(int n_dates = 48) {
        params.kappa_chi = 1.3;
        params.kappa_xi = 0.25;
        params.mu_xi = 0.03;
        params.sigma_chi = 0.3;
        params.sigma_xi = 0.12;
        params.rho = -0.3;
        params.meas_std = Eigen::VectorXd::Constant(5, 0.02);
        params.Q = 2;
        params.Gamma.resize(5, 2);
        params.Gamma << 0.4, -0.1, 0.2, 0.15, -0.3, 0.05, 0.1, -0.2, 0.25, 0.3;
        data = align_panels(testing::synth_futures(n_dates), testing::synth_yields(n_dates));
    }
};

std::vector<MonthStamp> month_run(const char* start, int n) {
    std::vector<MonthStamp> out;
    const MonthStamp first = MonthStamp::parse(start);
    for (int t = 0; t < n; ++t) out.push_back(first.plus_months(t));
    return out;
}

}  // namespace

TEST_CASE("shock scenarios reject inconsistent windows and multipliers") {
    ShockScenario open_ended;
    open_ended.kind = ShockKind::temporary;
    open_ended.start = MonthStamp::parse("2015-03");
    open_ended.multiplier = 1.2;
    CHECK_THROWS_WITH_AS(open_ended.validate(), "temporary shock needs an end month", Error);

    CHECK_THROWS_WITH_AS(temporary_shock("2015-06", "2015-05", 1.2).validate(),
                         "shock end month precedes its start", Error);

    ShockScenario capped = permanent_shock("2015-03", 1.2);
    capped.end = MonthStamp::parse("2015-09");
    CHECK_THROWS_WITH_AS(capped.validate(), "permanent shock must not carry an end month",
                         Error);

    for (double bad : {0.0, -2.0, std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::quiet_NaN()}) {
        try {
            permanent_shock("2015-03", bad).validate();
            FAIL("multiplier " << bad << " should have been rejected");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::domain);
            CHECK(std::string(e.what()) == "shock multiplier must be positive and finite");
        }
    }

    // One-month windows and small positive multipliers are legal.
    CHECK_NOTHROW(temporary_shock("2015-03", "2015-03", 1e-8).validate());
    CHECK_NOTHROW(permanent_shock("2015-03", 5.0).validate());
}

TEST_CASE("apply_shock with unit multiplier is a bitwise no-op") {
    const YieldPanel yields = testing::synth_yields(30);

    const YieldPanel p = apply_shock(yields, permanent_shock("2011-02", 1.0));
    CHECK(p.yields == yields.yields);
    CHECK(p.dates == yields.dates);

    const YieldPanel t = apply_shock(yields, temporary_shock("2010-05", "2010-11", 1.0));
    CHECK(t.yields == yields.yields);
}

TEST_CASE("permanent shocks scale every date from the start month on") {
    const YieldPanel yields = testing::synth_yields(24);  // 2010-01 .. 2011-12
    const YieldPanel shocked = apply_shock(yields, permanent_shock("2011-01", 2.0));

    for (Eigen::Index t = 0; t < 24; ++t) {
        if (t < 12) {
            CHECK(shocked.yields.col(t) == yields.yields.col(t));
        } else {
            // scaling by two is exact, so the comparison can be bitwise
            CHECK(shocked.yields.col(t) == 2.0 * yields.yields.col(t));
        }
    }
}

TEST_CASE("temporary shocks restore the panel after the end month") {
    const YieldPanel yields = testing::synth_yields(24);
    const YieldPanel shocked = apply_shock(yields, temporary_shock("2010-07", "2010-10", 0.5));

    const Eigen::Index lo = 6, hi = 9;  // 2010-07 .. 2010-10 inclusive
    for (Eigen::Index t = 0; t < 24; ++t) {
        if (t >= lo && t <= hi) {
            CHECK(shocked.yields.col(t) == 0.5 * yields.yields.col(t));
        } else {
            CHECK(shocked.yields.col(t) == yields.yields.col(t));
        }
    }
}

TEST_CASE("shocks cannot start after the panel ends") {
    const YieldPanel yields = testing::synth_yields(12);  // ends 2010-12
    CHECK_THROWS_WITH_AS(apply_shock(yields, permanent_shock("2011-01", 2.0)),
                         "shock starts after the yield panel ends", Error);
    // Starting exactly on the final month is fine.
    CHECK_NOTHROW(apply_shock(yields, permanent_shock("2010-12", 2.0)));
}

TEST_CASE("shocking commutes with date alignment") {
    const FuturesPanel futures = testing::synth_futures(
        30, 12, testing::month_tenors({1, 3, 6, 9, 12}), MonthStamp::parse("2010-03"));
    const YieldPanel yields = testing::synth_yields(36);  // 2010-01 .. 2012-12
    const ShockScenario scenario = permanent_shock("2010-09", 1.7);

    const AlignedDataset shock_then_align = align_panels(futures, apply_shock(yields, scenario));
    const AlignedDataset align_then_shock = [&] {
        AlignedDataset out = align_panels(futures, yields);
        out.yields = apply_shock(out.yields, scenario);
        return out;
    }();

    CHECK(shock_then_align.yields.dates == align_then_shock.yields.dates);
    CHECK(shock_then_align.yields.yields == align_then_shock.yields.yields);
}

TEST_CASE("identity shocks do not move stress prices") {
    const StressFixture fx;
    const ShockScenario identity = permanent_shock("2011-06", 1.0);

    for (const bool freeze : {true, false}) {
        StressOptions options;
        options.freeze_kpca = freeze;
        const StressRun run = stress_run(fx.data, fx.params, KernelSpec{}, identity, options);

        CHECK(run.base_prices.rows() == fx.data.n_dates());
        CHECK(run.base_prices.cols() == fx.data.futures.n_tenors());
        CHECK(run.base_prices == run.shocked_prices);
        CHECK(run.base_prices.allFinite());

        const StressReport report =
            bucket_report(run.base_prices, run.shocked_prices, fx.data.futures.dates,
                          fx.data.futures.tenors);
        CHECK(report.mean_diff.isZero(0.0));
        CHECK(report.ci_low.isZero(0.0));
        CHECK(report.ci_high.isZero(0.0));
    }
}

TEST_CASE("an all-zero yield panel is invariant under shocks") {
    YieldPanel flat;
    flat.tenors = testing::month_tenors({1, 3, 6, 9, 12});
    flat.dates = month_run("2010-01", 30);
    flat.yields = Eigen::MatrixXd::Zero(5, 30);

    StressFixture fx(30);
    fx.data = align_panels(fx.data.futures, flat);
    fx.params.Q = 1;
    fx.params.Gamma.resize(5, 1);
    fx.params.Gamma << 0.4, 0.2, -0.3, 0.1, 0.25;

    KernelSpec spec;
    spec.bandwidth = 1.0;  // zero pairwise distances leave no median to take

    for (const bool freeze : {true, false}) {
        StressOptions options;
        options.freeze_kpca = freeze;
        const StressRun run =
            stress_run(fx.data, fx.params, spec, permanent_shock("2010-06", 3.0), options);
        CHECK(run.base_prices == run.shocked_prices);
    }
}

TEST_CASE("frozen kernel-PCA keeps pre-shock prices causal") {
    const StressFixture fx;  // 2010-01 .. 2013-12
    const ShockScenario scenario = temporary_shock("2012-01", "2012-06", 2.0);
    const Eigen::Index start_idx = 24;

    StressOptions options;
    options.freeze_kpca = true;
    const StressRun run = stress_run(fx.data, fx.params, KernelSpec{}, scenario, options);

    for (Eigen::Index t = 0; t < start_idx; ++t) {
        CHECK(run.shocked_prices.row(t) == run.base_prices.row(t));
    }
    CHECK(run.shocked_prices.bottomRows(fx.data.n_dates() - start_idx) !=
          run.base_prices.bottomRows(fx.data.n_dates() - start_idx));

    const StressReport report = bucket_report(run.base_prices, run.shocked_prices,
                                              fx.data.futures.dates, fx.data.futures.tenors);
    CHECK(report.mean_diff.topRows(start_idx).isZero(0.0));
    CHECK(report.ci_low.topRows(start_idx).isZero(0.0));
    CHECK(report.ci_high.topRows(start_idx).isZero(0.0));
    CHECK(!report.mean_diff.bottomRows(fx.data.n_dates() - start_idx).isZero(0.0));
}

TEST_CASE("frozen scores double exactly inside the shock window") {
    const StressFixture fx;
    const ShockScenario scenario = temporary_shock("2011-03", "2011-08", 2.0);
    const Eigen::Index lo = 14, hi = 19;

    const KpcaModel kpca = fit_kpca(fx.data.yields, KernelSpec{}, fx.params.Q);
    const FactorScores base = factor_scores(kpca, fx.data.yields);
    const FactorScores shocked = factor_scores(kpca, apply_shock(fx.data.yields, scenario));

    for (Eigen::Index t = 0; t < fx.data.n_dates(); ++t) {
        if (t >= lo && t <= hi) {
            CHECK(shocked.U.row(t) == 2.0 * base.U.row(t));
        } else {
            CHECK(shocked.U.row(t) == base.U.row(t));
        }
    }
}

TEST_CASE("refitting the kernel on shocked yields is supported") {
    const StressFixture fx;
    StressOptions options;
    options.freeze_kpca = false;

    const StressRun run = stress_run(fx.data, fx.params, KernelSpec{},
                                     temporary_shock("2012-01", "2012-06", 2.0), options);
    CHECK(run.base_prices.rows() == fx.data.n_dates());
    CHECK(run.shocked_prices.rows() == fx.data.n_dates());
    CHECK(run.base_prices.allFinite());
    CHECK(run.shocked_prices.allFinite());
    CHECK(run.base_prices != run.shocked_prices);
}

TEST_CASE("stress_run insists on a functional model") {
    StressFixture fx;
    fx.params.Q = 0;
    fx.params.Gamma.resize(5, 0);
    CHECK_THROWS_WITH_AS(
        stress_run(fx.data, fx.params, KernelSpec{}, permanent_shock("2011-01", 2.0)),
        "stress pipeline needs a functional model (Q > 0)", Error);
}

TEST_CASE("default buckets split the first year into thirds") {
    const std::vector<TenorBucket> buckets = default_buckets();
    REQUIRE(buckets.size() == 3);
    CHECK(buckets[0].label == "0-4");
    CHECK(buckets[1].label == "4-8");
    CHECK(buckets[2].label == "8-12");

    // half-open on the left: month 4 still belongs to the first bucket
    CHECK(buckets[0].contains(Tenor(1)));
    CHECK(buckets[0].contains(Tenor(4)));
    CHECK(!buckets[0].contains(Tenor(5)));
    CHECK(buckets[1].contains(Tenor(5)));
    CHECK(buckets[1].contains(Tenor(8)));
    CHECK(buckets[2].contains(Tenor(9)));
    CHECK(buckets[2].contains(Tenor(12)));
    CHECK(!buckets[2].contains(Tenor(13)));
}

TEST_CASE("bucket_report on identical price paths is exactly zero") {
    std::mt19937_64 engine = make_engine(21, "bucket_zero");
    std::uniform_real_distribution<double> u(20.0, 90.0);
    Eigen::MatrixXd base(6, 5);
    for (Eigen::Index t = 0; t < 6; ++t)
        for (Eigen::Index i = 0; i < 5; ++i) base(t, i) = u(engine);

    const auto dates = month_run("2014-01", 6);
    const auto tenors = testing::month_tenors({1, 3, 6, 9, 12});
    const StressReport report = bucket_report(base, base, dates, tenors);

    CHECK(report.dates == dates);
    CHECK(report.mean_diff.rows() == 6);
    CHECK(report.mean_diff.cols() == 3);
    CHECK(report.mean_diff.isZero(0.0));
    CHECK(report.ci_low.isZero(0.0));
    CHECK(report.ci_high.isZero(0.0));
}

TEST_CASE("a uniform one-dollar move reports mean one with collapsed bands") {
    Eigen::MatrixXd base(4, 6);
    for (Eigen::Index t = 0; t < 4; ++t)
        for (Eigen::Index i = 0; i < 6; ++i)
            base(t, i) = 40.0 + static_cast<double>(t) + 0.5 * static_cast<double>(i);
    const Eigen::MatrixXd shocked = base.array() + 1.0;

    const auto dates = month_run("2014-01", 4);
    const auto tenors = testing::month_tenors({1, 2, 5, 6, 9, 10});
    const StressReport report = bucket_report(base, shocked, dates, tenors);

    // at this price scale adding one dollar is exact, so the cross-sectional
    // spread is identically zero and the band collapses onto the mean
    CHECK(report.mean_diff == Eigen::MatrixXd::Constant(4, 3, 1.0));
    CHECK(report.ci_low == report.mean_diff);
    CHECK(report.ci_high == report.mean_diff);
}

TEST_CASE("bucket means average the member contracts") {
    const auto tenors = testing::month_tenors({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    Eigen::MatrixXd base = Eigen::MatrixXd::Constant(3, 12, 50.0);
    Eigen::MatrixXd shocked = base;
    for (Eigen::Index t = 0; t < 3; ++t)
        for (Eigen::Index i = 0; i < 12; ++i) shocked(t, i) += static_cast<double>(i + 1);

    const auto dates = month_run("2014-01", 3);
    const StressReport report = bucket_report(base, shocked, dates, tenors);

    for (Eigen::Index t = 0; t < 3; ++t) {
        CHECK(report.mean_diff(t, 0) == 2.5);   // (1+2+3+4)/4
        CHECK(report.mean_diff(t, 1) == 6.5);   // (5+6+7+8)/4
        CHECK(report.mean_diff(t, 2) == 10.5);  // (9+10+11+12)/4

        // 95% band: 1.96 * sd / sqrt(4) with sd = sqrt(5/3) for {1,2,3,4}
        const double half_width = 1.96 * std::sqrt(5.0 / 3.0) / 2.0;
        for (Eigen::Index b = 0; b < 3; ++b) {
            CHECK(report.ci_high(t, b) - report.mean_diff(t, b) ==
                  doctest::Approx(half_width).epsilon(1e-12));
            CHECK(report.mean_diff(t, b) - report.ci_low(t, b) ==
                  doctest::Approx(half_width).epsilon(1e-12));
        }
    }
}

TEST_CASE("single-contract buckets report a degenerate band") {
    std::vector<TenorBucket> buckets = {{0, 1, "front"}, {1, 12, "back"}};
    const auto tenors = testing::month_tenors({1, 3, 6});
    Eigen::MatrixXd base = Eigen::MatrixXd::Constant(2, 3, 55.0);
    Eigen::MatrixXd shocked = base;
    shocked(0, 0) = 58.0;
    shocked(1, 0) = 51.0;

    const auto dates = month_run("2014-01", 2);
    const StressReport report = bucket_report(base, shocked, dates, tenors, buckets);
    CHECK(report.mean_diff(0, 0) == 3.0);
    CHECK(report.mean_diff(1, 0) == -4.0);
    CHECK(report.ci_low.col(0) == report.mean_diff.col(0));
    CHECK(report.ci_high.col(0) == report.mean_diff.col(0));
}

TEST_CASE("confidence bands always bracket the mean") {
    std::mt19937_64 engine = make_engine(22, "bucket_bands");
    std::normal_distribution<double> n(0.0, 2.0);
    Eigen::MatrixXd base = Eigen::MatrixXd::Constant(8, 12, 60.0);
    Eigen::MatrixXd shocked = base;
    for (Eigen::Index t = 0; t < 8; ++t)
        for (Eigen::Index i = 0; i < 12; ++i) shocked(t, i) += n(engine);

    const auto tenors = testing::month_tenors({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    const StressReport report =
        bucket_report(base, shocked, month_run("2014-01", 8), tenors);
    CHECK((report.ci_low.array() <= report.mean_diff.array()).all());
    CHECK((report.mean_diff.array() <= report.ci_high.array()).all());
}

TEST_CASE("bucket_report rejects gaps, overlaps and shape mismatches") {
    const Eigen::MatrixXd prices = Eigen::MatrixXd::Constant(2, 4, 50.0);
    const auto dates = month_run("2014-01", 2);

    // default buckets demand contracts beyond month four
    CHECK_THROWS_WITH_AS(
        bucket_report(prices, prices, dates, testing::month_tenors({1, 2, 3, 4})),
        Contains("has no tenors"), Error);

    // a contract past the last bucket is not silently dropped
    const Eigen::MatrixXd wide = Eigen::MatrixXd::Constant(2, 5, 50.0);
    CHECK_THROWS_WITH_AS(
        bucket_report(wide, wide, dates, testing::month_tenors({1, 5, 9, 12, 13})),
        Contains("m13 must fall in exactly one bucket"), Error);

    // overlapping buckets double-count the middle contract
    std::vector<TenorBucket> overlapping = {{0, 6, "0-6"}, {4, 12, "4-12"}};
    CHECK_THROWS_WITH_AS(
        bucket_report(prices, prices, dates, testing::month_tenors({1, 5, 9, 12}), overlapping),
        Contains("must fall in exactly one bucket"), Error);

    CHECK_THROWS_WITH_AS(
        bucket_report(prices, prices, month_run("2014-01", 3),
                      testing::month_tenors({1, 5, 9, 12})),
        Contains("must agree in shape"), Error);

    CHECK_THROWS_WITH_AS(bucket_report(prices, prices, dates,
                                       testing::month_tenors({1, 5, 9, 12}),
                                       std::vector<TenorBucket>{}),
                         "no tenor buckets given", Error);
}
