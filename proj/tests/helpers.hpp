// Shared fixtures for the unit suite: random-but-valid parameter draws,
// deterministic synthetic panels, and a scratch-directory guard.
#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ssfr/model.hpp"
#include "ssfr/panels.hpp"
#include "ssfr/rng.hpp"

namespace testing {

inline ssfr::ModelParams random_params(std::mt19937_64& engine, Eigen::Index P, int Q) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * u(engine); };

    ssfr::ModelParams p;
    p.kappa_xi = std::exp(uni(-2.3, 0.2));
    p.kappa_chi = p.kappa_xi + std::exp(uni(-1.5, 0.8));
    p.mu_xi = uni(-0.3, 0.3);
    p.sigma_chi = std::exp(uni(-2.0, -0.3));
    p.sigma_xi = std::exp(uni(-2.5, -0.8));
    p.rho = uni(-0.85, 0.85);
    p.lambda_chi = uni(-0.2, 0.2);
    p.lambda_xi = uni(-0.2, 0.2);
    p.meas_std.resize(P);
    for (Eigen::Index i = 0; i < P; ++i) p.meas_std(i) = std::exp(uni(-4.0, -2.0));
    p.Q = Q;
    p.Gamma.resize(P, Q);
    for (Eigen::Index i = 0; i < P; ++i)
        for (int j = 0; j < Q; ++j) p.Gamma(i, j) = uni(-0.5, 0.5);
    return p;
}

inline std::vector<ssfr::Tenor> month_tenors(std::initializer_list<int> months) {
    std::vector<ssfr::Tenor> out;
    for (int m : months) out.emplace_back(m);
    return out;
}

// Smooth positive yield curves with mild deterministic wiggle; enough
// cross-tenor and cross-date variation for the kernel matrix to have full
// numerical rank.
inline ssfr::YieldPanel synth_yields(int n_dates, std::uint64_t seed = 11,
                                     std::vector<ssfr::Tenor> tenors = month_tenors({1, 3, 6, 9, 12}),
                                     ssfr::MonthStamp start = ssfr::MonthStamp::parse("2010-01")) {
    auto engine = ssfr::make_engine(seed, "synth_yields");
    std::normal_distribution<double> noise(0.0, 0.002);

    ssfr::YieldPanel panel;
    panel.tenors = std::move(tenors);
    const auto m = static_cast<Eigen::Index>(panel.tenors.size());
    panel.yields.resize(m, n_dates);
    for (int t = 0; t < n_dates; ++t) {
        panel.dates.push_back(start.plus_months(t));
        const double level = 0.02 + 0.008 * std::sin(2.0 * M_PI * t / 37.0);
        const double slope = 0.012 + 0.006 * std::cos(2.0 * M_PI * t / 59.0);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double tau = panel.tenors[static_cast<std::size_t>(i)].years();
            panel.yields(i, t) = level + slope * tau + 0.003 * std::sin(3.0 * tau + 0.4 * t) +
                                 noise(engine);
        }
    }
    panel.validate();
    return panel;
}

inline ssfr::FuturesPanel synth_futures(int n_dates, std::uint64_t seed = 12,
                                        std::vector<ssfr::Tenor> tenors = month_tenors({1, 3, 6, 9, 12}),
                                        ssfr::MonthStamp start = ssfr::MonthStamp::parse("2010-01")) {
    auto engine = ssfr::make_engine(seed, "synth_futures");
    std::normal_distribution<double> noise(0.0, 0.03);

    ssfr::FuturesPanel panel;
    panel.tenors = std::move(tenors);
    const auto p = static_cast<Eigen::Index>(panel.tenors.size());
    panel.log_prices.resize(n_dates, p);
    for (int t = 0; t < n_dates; ++t) {
        panel.dates.push_back(start.plus_months(t));
        const double level = 4.0 + 0.25 * std::sin(2.0 * M_PI * t / 41.0);
        for (Eigen::Index i = 0; i < p; ++i) {
            const double tau = panel.tenors[static_cast<std::size_t>(i)].years();
            panel.log_prices(t, i) = level + 0.05 * tau + noise(engine);
        }
    }
    panel.validate();
    return panel;
}

class TempDir {
  public:
    explicit TempDir(const std::string& name)
        : path_(std::filesystem::temp_directory_path() / ("ssfr_test_" + name)) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace testing
