// Independent reference implementations used only by tests. Everything here
// is written with plain loops and hand-rolled dense algebra so that agreement
// with the library is evidence, not tautology: no Eigen decompositions, no
// shared code paths with src/.
#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ssfr/model.hpp"

namespace oracle {

// Row-major dense matrix with the handful of operations the oracles need.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

Mat mul(const Mat& x, const Mat& y);
Mat transpose(const Mat& x);

// Plain Cholesky (lower). Returns false when a pivot is not strictly positive.
bool cholesky_lower(const Mat& s, Mat& l);

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Eigenvalues come
// back descending, eigenvectors as matching columns of `vectors`.
void jacobi_eigen(const Mat& s, std::vector<double>& values, Mat& vectors);

// log N(y | mean, cov) without the -n/2 log(2 pi) constant, evaluated through
// the hand-rolled Cholesky above.
double mvn_loglik_noconst(const std::vector<double>& mean, const Mat& cov,
                          const std::vector<double>& y);

// Stacked-observation joint distribution of Y_1..Y_N implied by the state
// space: the state chain is unrolled into explicit cross-covariances
// Cov(X_s, X_t) = V_s (E^{t-s})^T and mapped through the measurement
// equation, then the Gaussian density is evaluated directly. O((NP)^3), for
// tiny N and P only.
double joint_loglik_oracle(const ssfr::ModelParams& params,
                           const std::vector<double>& tenor_years_grid, double dt,
                           const Eigen::Vector2d& a0, const Eigen::Matrix2d& P0,
                           const Eigen::MatrixXd& observations,
                           const std::optional<Eigen::MatrixXd>& u_series);

// Term-by-term re-evaluation of the deterministic log-futures intercept,
// grouped differently and computed through expm1.
double a_function_oracle(const ssfr::ModelParams& params, double tau_years);

}  // namespace oracle
