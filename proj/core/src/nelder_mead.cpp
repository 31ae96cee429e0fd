// SPDX-License-Identifier: Apache-2.0
#include "ssfr/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ssfr/errors.hpp"

namespace ssfr {

namespace {

struct Simplex {
    std::vector<Eigen::VectorXd> x;
    std::vector<double> f;

    void sort() {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [this](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        std::vector<Eigen::VectorXd> xs;
        std::vector<double> fs;
        xs.reserve(x.size());
        fs.reserve(f.size());
        for (std::size_t i : idx) {
            xs.push_back(std::move(x[i]));
            fs.push_back(f[i]);
        }
        x = std::move(xs);
        f = std::move(fs);
    }

    double spread() const { return f.back() - f.front(); }
};

Simplex make_simplex(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const Eigen::VectorXd& center, double step) {
    const Eigen::Index n = center.size();
    Simplex s;
    s.x.reserve(static_cast<std::size_t>(n) + 1);
    s.x.push_back(center);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd v = center;
        v(i) += step;
        s.x.push_back(std::move(v));
    }
    s.f.reserve(s.x.size());
    for (const auto& v : s.x) s.f.push_back(objective(v));
    s.sort();
    return s;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& options) {
    const Eigen::Index n = start.size();
    if (n < 1) {
        throw Error(ErrorCode::domain, "optimizer needs at least one coordinate");
    }
    if (!start.allFinite()) {
        throw Error(ErrorCode::domain, "optimizer start point must be finite");
    }

    NelderMeadResult best;
    best.x = start;
    best.fval = objective(start);
    best.converged = false;

    int iters_left = options.max_iter;
    double step = options.initial_step;
    for (int round = 0; round <= options.n_restarts && iters_left > 0; ++round) {
        Simplex s = make_simplex(objective, best.x, step);
        bool round_converged = false;
        while (iters_left > 0) {
            --iters_left;
            ++best.iterations;
            if (s.spread() < options.tol) {
                round_converged = true;
                break;
            }

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (std::size_t i = 0; i + 1 < s.x.size(); ++i) centroid += s.x[i];
            centroid /= static_cast<double>(n);

            const Eigen::VectorXd& worst = s.x.back();
            Eigen::VectorXd reflected = centroid + (centroid - worst);
            const double f_ref = objective(reflected);

            if (f_ref < s.f.front()) {
                Eigen::VectorXd expanded = centroid + 2.0 * (centroid - worst);
                const double f_exp = objective(expanded);
                if (f_exp < f_ref) {
                    s.x.back() = std::move(expanded);
                    s.f.back() = f_exp;
                } else {
                    s.x.back() = std::move(reflected);
                    s.f.back() = f_ref;
                }
            } else if (f_ref < s.f[s.f.size() - 2]) {
                s.x.back() = std::move(reflected);
                s.f.back() = f_ref;
            } else {
                const bool outside = f_ref < s.f.back();
                Eigen::VectorXd contracted =
                    outside ? (centroid + 0.5 * (reflected - centroid)).eval()
                            : (centroid + 0.5 * (worst - centroid)).eval();
                const double f_con = objective(contracted);
                if (f_con < (outside ? f_ref : s.f.back())) {
                    s.x.back() = std::move(contracted);
                    s.f.back() = f_con;
                } else {
                    for (std::size_t i = 1; i < s.x.size(); ++i) {
                        s.x[i] = s.x.front() + 0.5 * (s.x[i] - s.x.front());
                        s.f[i] = objective(s.x[i]);
                    }
                }
            }
            s.sort();
        }
        if (s.f.front() < best.fval ||
            (round == 0 && s.f.front() == best.fval)) {
            best.fval = s.f.front();
            best.x = s.x.front();
        }
        best.converged = round_converged;
        step *= 0.5;
    }
    return best;
}

}  // namespace ssfr
