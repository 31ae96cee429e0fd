#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "ssfr/errors.hpp"
#include "ssfr/kernel.hpp"
#include "ssfr/kpca.hpp"

using namespace ssfr;

namespace {

KernelSpec rbf(double bandwidth) {
    KernelSpec spec;
    spec.kind = KernelKind::rbf;
    spec.bandwidth = bandwidth;
    return spec;
}

KernelSpec linear() {
    KernelSpec spec;
    spec.kind = KernelKind::linear;
    return spec;
}

// Kernel matrix recomputed with plain dot-product loops, bypassing the
// library's kernel_value.
oracle::Mat kernel_matrix_oracle(const YieldPanel& panel, const KernelSpec& spec) {
    const int m = static_cast<int>(panel.n_tenors());
    const int n = static_cast<int>(panel.n_dates());
    oracle::Mat k(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (spec.kind == KernelKind::linear) {
                double dot = 0.0;
                for (int t = 0; t < n; ++t) dot += panel.yields(i, t) * panel.yields(j, t);
                k.at(i, j) = dot;
            } else {
                double d2 = 0.0;
                for (int t = 0; t < n; ++t) {
                    const double d = panel.yields(i, t) - panel.yields(j, t);
                    d2 += d * d;
                }
                k.at(i, j) = std::exp(-d2 / (2.0 * *spec.bandwidth * *spec.bandwidth));
            }
        }
    }
    return k;
}

}  // namespace

TEST_CASE("kernel_value: rbf basics and the linear dot product") {
    Eigen::VectorXd x(2), y(2);

    x << 0.3, -1.2;
    CHECK(kernel_value(x, x, rbf(0.7)) == 1.0);

    x << 0.0, 0.0;
    y << 2.0, 0.0;
    CHECK(kernel_value(x, y, rbf(std::sqrt(2.0))) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    x << 1.0, 2.0;
    y << 3.0, 4.0;
    CHECK(kernel_value(x, y, linear()) == doctest::Approx(11.0).epsilon(1e-15));
}

TEST_CASE("kernel_value: rbf stays in (0, 1] and rejects length mismatch") {
    auto engine = make_engine(5, "kernel_range");
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd x(4), y(4);
        for (int i = 0; i < 4; ++i) {
            x(i) = u(engine);
            y(i) = u(engine);
        }
        const double v = kernel_value(x, y, rbf(1.3));
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    Eigen::VectorXd x(3), y(4);
    CHECK_THROWS_AS(kernel_value(x, y, rbf(1.0)), Error);
}

TEST_CASE("median_bandwidth: single pair, odd pair count, degenerate rows") {
    std::vector<Eigen::VectorXd> two(2, Eigen::VectorXd(2));
    two[0] << 0.0, 0.0;
    two[1] << 3.0, 4.0;
    CHECK(median_bandwidth(two) == doctest::Approx(5.0).epsilon(1e-15));

    std::vector<Eigen::VectorXd> three(3, Eigen::VectorXd(1));
    three[0] << 0.0;
    three[1] << 1.0;
    three[2] << 3.0;
    // Pairwise distances {1, 2, 3}; the median is 2.
    CHECK(median_bandwidth(three) == doctest::Approx(2.0).epsilon(1e-15));

    std::vector<Eigen::VectorXd> same(3, Eigen::VectorXd::Constant(2, 0.7));
    CHECK_THROWS_AS(median_bandwidth(same), Error);
}

TEST_CASE("median_bandwidth: even pair count takes the lower median") {
    // Four rows on a line give six distances {1,2,3,1,2,1} -> sorted
    // {1,1,1,2,2,3}; lower median = 1.
    std::vector<Eigen::VectorXd> rows(4, Eigen::VectorXd(1));
    rows[0] << 0.0;
    rows[1] << 1.0;
    rows[2] << 2.0;
    rows[3] << 3.0;
    CHECK(median_bandwidth(rows) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("trapezoid_weights on the 1,3,6,9,12-month grid") {
    const Eigen::VectorXd w = trapezoid_weights(testing::month_tenors({1, 3, 6, 9, 12}));
    REQUIRE(w.size() == 5);
    // Hand arithmetic in years: half-gaps around each node.
    CHECK(w(0) == doctest::Approx((3.0 - 1.0) / 12.0 / 2.0).epsilon(1e-15));
    CHECK(w(1) == doctest::Approx((6.0 - 1.0) / 12.0 / 2.0).epsilon(1e-15));
    CHECK(w(2) == doctest::Approx((9.0 - 3.0) / 12.0 / 2.0).epsilon(1e-15));
    CHECK(w(3) == doctest::Approx((12.0 - 6.0) / 12.0 / 2.0).epsilon(1e-15));
    CHECK(w(4) == doctest::Approx((12.0 - 9.0) / 12.0 / 2.0).epsilon(1e-15));
    CHECK((w.array() > 0.0).all());

    CHECK_THROWS_AS(trapezoid_weights(testing::month_tenors({6})), Error);
}

TEST_CASE("fit_kpca with the linear kernel matches a hand-rolled Gram-matrix PCA") {
    YieldPanel panel = testing::synth_yields(60);
    // Mean-center the rows so the Gram matrix is the classical PCA input.
    const Eigen::VectorXd mean_row = panel.yields.colwise().mean();
    panel.yields.rowwise() -= mean_row.transpose();

    const KpcaModel model = fit_kpca(panel, linear(), 3);

    const oracle::Mat k = kernel_matrix_oracle(panel, linear());
    std::vector<double> values;
    oracle::Mat vectors;
    oracle::jacobi_eigen(k, values, vectors);

    for (int q = 0; q < 3; ++q) {
        CHECK(model.eigenvalues(q) ==
              doctest::Approx(values[static_cast<std::size_t>(q)]).epsilon(1e-8));
        // Scores match the oracle's eigvec * sqrt(eigval) up to column sign.
        double best = 1e300;
        for (double sign : {1.0, -1.0}) {
            double diff = 0.0;
            for (int i = 0; i < k.rows; ++i) {
                const double o =
                    sign * vectors.at(i, q) * std::sqrt(values[static_cast<std::size_t>(q)]);
                diff = std::max(diff, std::abs(model.scores(i, q) - o));
            }
            best = std::min(best, diff);
        }
        CHECK(best < 1e-8);
    }
}

TEST_CASE("fit_kpca: identical rows give a rank-1 kernel; Q=2 is infeasible") {
    YieldPanel panel;
    panel.tenors = testing::month_tenors({1, 3});
    panel.dates = {MonthStamp::parse("2010-01"), MonthStamp::parse("2010-02"),
                   MonthStamp::parse("2010-03")};
    panel.yields.resize(2, 3);
    panel.yields.row(0) << 0.01, 0.02, 0.03;
    panel.yields.row(1) << 0.01, 0.02, 0.03;

    const KpcaModel one = fit_kpca(panel, rbf(0.5), 1);
    CHECK((one.K.array() - 1.0).abs().maxCoeff() < 1e-15);  // all distances zero
    CHECK(one.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(fit_kpca(panel, rbf(0.5), 2), doctest::Contains("eigenvalue"), Error);
}

TEST_CASE("fit_kpca eigen-identities hold on a generic rbf fit") {
    const YieldPanel panel = testing::synth_yields(80);
    const KpcaModel model = fit_kpca(panel, KernelSpec{}, 3);  // median bandwidth

    REQUIRE(model.n_factors() == 3);
    CHECK(model.spec.bandwidth.has_value());

    // A^T K = Lambda A^T, relative to the eigenvalue scale.
    const Eigen::MatrixXd lhs = model.scores.transpose() * model.K;
    const Eigen::MatrixXd rhs = model.eigenvalues.asDiagonal() * model.scores.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8 * model.eigenvalues(0));

    // R^T R = I and A = R Lambda^{1/2}.
    const Eigen::MatrixXd rtr = model.R.transpose() * model.R;
    CHECK((rtr - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    const Eigen::MatrixXd recon =
        model.R * model.eigenvalues.cwiseSqrt().asDiagonal();
    CHECK((recon - model.scores).cwiseAbs().maxCoeff() < 1e-10);

    // A^T A = Lambda.
    const Eigen::MatrixXd ata = model.scores.transpose() * model.scores;
    CHECK((ata - Eigen::MatrixXd(model.eigenvalues.asDiagonal())).cwiseAbs().maxCoeff() <
          1e-10 * model.eigenvalues(0));

    // W = A Lambda^{-1}.
    const Eigen::MatrixXd w = model.scores * model.eigenvalues.cwiseInverse().asDiagonal();
    CHECK((w - model.weights).cwiseAbs().maxCoeff() < 1e-12);

    // Eigenvalues descending and strictly above tolerance.
    for (int q = 1; q < 3; ++q) CHECK(model.eigenvalues(q) <= model.eigenvalues(q - 1));
    CHECK(model.eigenvalues(2) > 1e-10 * model.eigenvalues(0));

    // Sign convention: the largest-magnitude entry of each R column is positive.
    for (int q = 0; q < 3; ++q) {
        Eigen::Index arg = 0;
        model.R.col(q).cwiseAbs().maxCoeff(&arg);
        CHECK(model.R(arg, q) > 0.0);
    }
}

TEST_CASE("fit_kpca trace identity and positive semidefiniteness via the Jacobi oracle") {
    const YieldPanel panel = testing::synth_yields(50, 21);
    const KpcaModel model = fit_kpca(panel, rbf(0.02), 2);

    oracle::Mat k(static_cast<int>(model.K.rows()), static_cast<int>(model.K.cols()));
    for (int i = 0; i < k.rows; ++i)
        for (int j = 0; j < k.cols; ++j) k.at(i, j) = model.K(i, j);

    std::vector<double> values;
    oracle::Mat vectors;
    oracle::jacobi_eigen(k, values, vectors);

    double eigen_sum = 0.0;
    for (double v : values) eigen_sum += v;
    CHECK(model.K.trace() == doctest::Approx(eigen_sum).epsilon(1e-8));

    // PSD up to round-off.
    CHECK(values.back() >= -1e-8 * values.front());
}

TEST_CASE("fit_kpca input validation") {
    const YieldPanel panel = testing::synth_yields(30);
    CHECK_THROWS_AS(fit_kpca(panel, KernelSpec{}, 0), Error);
    CHECK_THROWS_AS(fit_kpca(panel, KernelSpec{}, 6), Error);  // Q > M = 5
    CHECK_THROWS_AS(fit_kpca(panel, KernelSpec{}, 2, 0.0), Error);
    CHECK_THROWS_AS(fit_kpca(panel, KernelSpec{}, 2, -1.0), Error);

    // Huge values overflow the linear kernel into non-finite entries.
    YieldPanel big = panel;
    big.yields.setConstant(1e200);
    big.yields.row(0).setConstant(-1e200);
    try {
        fit_kpca(big, linear(), 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::numeric);
    }
}

TEST_CASE("project_new_tenor reproduces in-sample scores") {
    const YieldPanel panel = testing::synth_yields(60, 9);

    for (bool center : {false, true}) {
        const KpcaModel model = fit_kpca(panel, KernelSpec{}, 2, 1e-10, center);
        for (Eigen::Index i = 0; i < model.n_rows(); ++i) {
            const Eigen::VectorXd alpha = project_new_tenor(model, panel.tenor_series(i));
            CHECK((alpha - model.scores.row(i).transpose()).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("project_new_tenor: zero weights, kernel decay, length checks") {
    const YieldPanel panel = testing::synth_yields(40, 2);
    KpcaModel model = fit_kpca(panel, KernelSpec{}, 1);

    KpcaModel zeroed = model;
    zeroed.weights.setZero();
    const Eigen::VectorXd at_zero = project_new_tenor(zeroed, panel.tenor_series(0));
    CHECK(at_zero.cwiseAbs().maxCoeff() == 0.0);

    // A far-away point under rbf decays to zero scores.
    const Eigen::VectorXd far = Eigen::VectorXd::Constant(panel.n_dates(), 1e4);
    CHECK(project_new_tenor(model, far).cwiseAbs().maxCoeff() < 1e-10);

    const Eigen::VectorXd wrong = Eigen::VectorXd::Zero(panel.n_dates() + 1);
    CHECK_THROWS_AS(project_new_tenor(model, wrong), Error);
}

TEST_CASE("basis columns are orthonormal under the quadrature weights") {
    const YieldPanel panel = testing::synth_yields(70, 4);
    const KpcaModel model = fit_kpca(panel, KernelSpec{}, 3);

    const Eigen::MatrixXd gram =
        basis_values(model).transpose() * model.quadrature.asDiagonal() * basis_values(model);
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

    // Sign convention matches the score columns.
    for (int q = 0; q < 3; ++q) {
        Eigen::Index arg = 0;
        model.basis.col(q).cwiseAbs().maxCoeff(&arg);
        CHECK(model.basis(arg, q) > 0.0);
    }
}

TEST_CASE("Q=1 basis is the score column rescaled into quadrature units") {
    // On a uniform grid the quadrature weights at interior nodes are equal,
    // so the classic reading "basis proportional to the score column" holds
    // there; on non-uniform grids each node is rescaled by its own weight so
    // that orthonormality is exact (see notes in the kpca source).
    const YieldPanel uniform =
        testing::synth_yields(50, 6, testing::month_tenors({2, 4, 6, 8, 10}));
    const KpcaModel model = fit_kpca(uniform, KernelSpec{}, 1);

    auto proportional = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        const double c = a.dot(b) / b.squaredNorm();
        return (a - c * b).cwiseAbs().maxCoeff() < 1e-10 * a.cwiseAbs().maxCoeff();
    };

    // sqrt(w_i) e_1(tau_i) is proportional to the score column everywhere.
    const Eigen::VectorXd scaled =
        model.quadrature.cwiseSqrt().cwiseProduct(model.basis.col(0));
    CHECK(proportional(scaled, model.scores.col(0)));

    // Interior nodes of the uniform grid share one weight, so plain
    // proportionality holds there too.
    CHECK(proportional(model.basis.col(0).segment(1, 3),
                       model.scores.col(0).segment(1, 3)));
}

TEST_CASE("factor_scores recovers basis-combination coefficients") {
    const YieldPanel panel = testing::synth_yields(40, 8);
    const KpcaModel model = fit_kpca(panel, KernelSpec{}, 2);

    // Build a panel whose curves are exact 2-term basis combinations.
    auto engine = make_engine(17, "kl_coeffs");
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    YieldPanel combo = panel;
    Eigen::MatrixXd coeffs(panel.n_dates(), 2);
    for (Eigen::Index t = 0; t < panel.n_dates(); ++t) {
        coeffs(t, 0) = u(engine);
        coeffs(t, 1) = u(engine);
        combo.yields.col(t) = model.basis * coeffs.row(t).transpose();
    }

    const FactorScores scores = factor_scores(model, combo);
    CHECK(scores.dates == combo.dates);
    CHECK((scores.U - coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("factor_scores: zero curves, doubling, and grid mismatch") {
    const YieldPanel panel = testing::synth_yields(30, 3);
    const KpcaModel model = fit_kpca(panel, KernelSpec{}, 2);

    YieldPanel with_zero = panel;
    with_zero.yields.col(7).setZero();
    const FactorScores scores = factor_scores(model, with_zero);
    CHECK(scores.U.row(7).cwiseAbs().maxCoeff() == 0.0);

    YieldPanel doubled = panel;
    doubled.yields *= 2.0;
    const FactorScores base = factor_scores(model, panel);
    const FactorScores twice = factor_scores(model, doubled);
    CHECK(twice.U == 2.0 * base.U);  // scaling by 2 is exact in binary

    YieldPanel other_grid = testing::synth_yields(30, 3, testing::month_tenors({1, 2, 3, 4, 5}));
    CHECK_THROWS_WITH_AS(factor_scores(model, other_grid), doctest::Contains("grid"), Error);
}

TEST_CASE("factor_scores is linear in the yield panel") {
    const YieldPanel p1 = testing::synth_yields(25, 13);
    const YieldPanel p2 = testing::synth_yields(25, 14);
    const KpcaModel model = fit_kpca(p1, KernelSpec{}, 2);

    YieldPanel mix = p1;
    mix.yields = 0.3 * p1.yields + 1.7 * p2.yields;

    const Eigen::MatrixXd expected =
        0.3 * factor_scores(model, p1).U + 1.7 * factor_scores(model, p2).U;
    CHECK((factor_scores(model, mix).U - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("centered fits double-center the kernel and stay projection-consistent") {
    const YieldPanel panel = testing::synth_yields(45, 19);
    const KpcaModel model = fit_kpca(panel, KernelSpec{}, 2, 1e-10, true);

    CHECK(model.centered);
    // Double-centering zeroes every row sum.
    CHECK(model.K.rowwise().sum().cwiseAbs().maxCoeff() < 1e-10);

    // Scores still satisfy the eigen-identity on the centered matrix.
    const Eigen::MatrixXd lhs = model.scores.transpose() * model.K;
    const Eigen::MatrixXd rhs = model.eigenvalues.asDiagonal() * model.scores.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8 * model.eigenvalues(0));
}
