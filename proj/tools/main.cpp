// SPDX-License-Identifier: Apache-2.0
//
// ssfr: term-structure model driver.
//
// Subcommands: fit, simulate, extract-factors, evaluate, stress. Every run is
// a pure function of (config file, input files, seed): outputs are
// byte-identical across reruns, and each run writes a manifest.json recording
// the resolved config digest, input digests and tool version. Flags override
// config-file fields; built-in defaults apply last.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ssfr/analysis.hpp"
#include "ssfr/csv_io.hpp"
#include "ssfr/errors.hpp"
#include "ssfr/estimate.hpp"
#include "ssfr/json_io.hpp"
#include "ssfr/kalman.hpp"
#include "ssfr/kpca.hpp"
#include "ssfr/model.hpp"
#include "ssfr/rng.hpp"
#include "ssfr/stress.hpp"
#include "ssfr/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ssfr;

namespace {

struct Options {
    std::string config_file;

    std::optional<std::string> futures;
    std::optional<std::string> yields;
    std::optional<std::string> output;
    std::optional<bool> yields_percent;

    std::optional<int> q;
    std::optional<std::string> kernel;
    std::optional<double> bandwidth;

    std::optional<std::uint64_t> seed;
    std::optional<int> n_starts;
    std::optional<int> max_iter;
    std::optional<double> tol;

    std::optional<std::string> params_file;
    std::optional<std::string> model_file;
    std::optional<std::string> ss_model_file;
    std::optional<std::string> fr_model_file;
    std::optional<std::string> kpca_file;
    std::optional<std::string> factors_file;

    std::optional<int> n_steps;
    std::optional<std::string> start;
    std::optional<double> dt;

    bool use_filtered = false;

    std::optional<std::string> shock_kind;
    std::optional<std::string> shock_start;
    std::optional<std::string> shock_end;
    std::optional<double> multiplier;
    bool freeze_kpca = false;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    json cfg;
    try {
        cfg = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad config file: ") + e.what());
    }
    if (!cfg.is_object()) {
        throw Error(ErrorCode::parse, "config root must be a JSON object");
    }
    return cfg;
}

template <typename T>
T config_get(const json& cfg, const char* key, const T& fallback) {
    auto it = cfg.find(key);
    if (it == cfg.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("config field '") + key + "': " + e.what());
    }
}

template <typename T>
T resolve(const std::optional<T>& flag, const json& cfg, const char* key, const T& fallback) {
    if (flag) return *flag;
    return config_get(cfg, key, fallback);
}

template <typename T>
std::optional<T> resolve_opt(const std::optional<T>& flag, const json& cfg, const char* key) {
    if (flag) return flag;
    if (cfg.contains(key)) return config_get<T>(cfg, key, T{});
    return std::nullopt;
}

std::string require_input(const std::optional<std::string>& flag, const json& cfg,
                          const char* key, const char* what) {
    const std::string value = resolve(flag, cfg, key, std::string{});
    if (value.empty()) {
        throw Error(ErrorCode::domain,
                    std::string(what) + " required (flag --" + key + " or config '" + key + "')");
    }
    return value;
}

KernelSpec resolve_kernel(const Options& opt, const json& cfg) {
    const std::string kind = resolve(opt.kernel, cfg, "kernel", std::string("rbf"));
    KernelSpec spec;
    if (kind == "rbf") {
        spec.kind = KernelKind::rbf;
    } else if (kind == "linear") {
        spec.kind = KernelKind::linear;
    } else {
        throw Error(ErrorCode::domain, "kernel must be 'rbf' or 'linear', got '" + kind + "'");
    }
    spec.bandwidth = resolve_opt(opt.bandwidth, cfg, "bandwidth");
    return spec;
}

IngestionConfig yields_ingestion(const Options& opt, const json& cfg) {
    IngestionConfig ic;
    ic.values_in_percent = resolve(opt.yields_percent, cfg, "yields_in_percent", false);
    ic.required_tenors = config_get(cfg, "yield_tenors", std::vector<int>{});
    return ic;
}

// --- output helpers ------------------------------------------------------

std::string digest_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

class RunWriter {
  public:
    RunWriter(std::string command, fs::path out_dir)
        : command_(std::move(command)), out_dir_(std::move(out_dir)) {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) {
            throw Error(ErrorCode::io, "cannot create output directory: " + out_dir_.string());
        }
    }

    const fs::path& dir() const { return out_dir_; }

    void add_input(const std::string& label, const fs::path& path) {
        inputs_[label] = digest_hex(read_text_file(path));
    }

    fs::path emit(const std::string& name, const std::string& content) {
        const fs::path path = out_dir_ / name;
        write_text_file(path, content);
        outputs_[name] = digest_hex(content);
        return path;
    }

    // For files written by panel savers rather than through emit().
    void record_output(const std::string& name) {
        outputs_[name] = digest_hex(read_text_file(out_dir_ / name));
    }

    void finish(const json& resolved_config, std::uint64_t seed) {
        json m;
        m["command"] = command_;
        m["version"] = kVersion;
        m["seed"] = seed;
        m["config"] = resolved_config;
        m["config_digest"] = digest_hex(resolved_config.dump(2));
        m["inputs"] = inputs_;
        m["outputs"] = outputs_;
        write_text_file(out_dir_ / "manifest.json", m.dump(2) + "\n");
    }

  private:
    std::string command_;
    fs::path out_dir_;
    std::map<std::string, std::string> inputs_;
    std::map<std::string, std::string> outputs_;
};

std::string states_csv(const std::vector<MonthStamp>& dates, const Eigen::MatrixXd& states) {
    std::string out = "date,chi,xi\n";
    for (Eigen::Index t = 0; t < states.rows(); ++t) {
        out += dates[static_cast<std::size_t>(t)].str();
        out += ',' + format_value(states(t, 0));
        out += ',' + format_value(states(t, 1));
        out += '\n';
    }
    return out;
}

std::string factors_csv(const FactorScores& scores) {
    std::string out = "date";
    for (Eigen::Index j = 0; j < scores.U.cols(); ++j) out += ",u" + std::to_string(j + 1);
    out += '\n';
    for (Eigen::Index t = 0; t < scores.U.rows(); ++t) {
        out += scores.dates[static_cast<std::size_t>(t)].str();
        for (Eigen::Index j = 0; j < scores.U.cols(); ++j) {
            out += ',' + format_value(scores.U(t, j));
        }
        out += '\n';
    }
    return out;
}

std::string panel_csv(const std::vector<MonthStamp>& dates, const std::vector<Tenor>& tenors,
                      const Eigen::MatrixXd& values) {
    std::string out = "date";
    for (const Tenor& t : tenors) out += ",m" + std::to_string(t.months());
    out += '\n';
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
        out += dates[static_cast<std::size_t>(t)].str();
        for (Eigen::Index c = 0; c < values.cols(); ++c) out += ',' + format_value(values(t, c));
        out += '\n';
    }
    return out;
}

FactorScores load_factors_csv(const fs::path& path) {
    const std::string text = read_text_file(path);
    FactorScores scores;
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    bool header = true;
    Eigen::Index q = -1;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = eol + 1;
        if (line.empty()) continue;

        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (header) {
            if (cells.empty() || cells[0] != "date") {
                throw Error(ErrorCode::parse, "factor file must start with a 'date' column");
            }
            q = static_cast<Eigen::Index>(cells.size()) - 1;
            for (Eigen::Index j = 0; j < q; ++j) {
                if (cells[static_cast<std::size_t>(j + 1)] != "u" + std::to_string(j + 1)) {
                    throw Error(ErrorCode::parse, "factor columns must be named u1..uQ in order");
                }
            }
            if (q < 1) throw Error(ErrorCode::parse, "factor file has no factor columns");
            header = false;
            continue;
        }
        if (static_cast<Eigen::Index>(cells.size()) != q + 1) {
            throw Error(ErrorCode::parse, "ragged row in " + path.string());
        }
        scores.dates.push_back(MonthStamp::parse(cells[0]));
        std::vector<double> row;
        for (Eigen::Index j = 1; j <= q; ++j) {
            const std::string& cell = cells[static_cast<std::size_t>(j)];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw Error(ErrorCode::parse, "unparseable factor value '" + cell + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::parse, "factor file has no data rows");
    scores.U.resize(static_cast<Eigen::Index>(rows.size()), q);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        for (Eigen::Index j = 0; j < q; ++j) {
            scores.U(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<std::size_t>(j)];
        }
    }
    return scores;
}

// --- subcommands ---------------------------------------------------------

struct LoadedData {
    AlignedDataset dataset;
    bool has_yields = false;
};

LoadedData load_dataset(const Options& opt, const json& cfg, bool need_yields, RunWriter& run) {
    const std::string futures_path = require_input(opt.futures, cfg, "futures", "futures CSV");
    FuturesPanel futures = load_futures_csv(futures_path);
    run.add_input("futures", futures_path);

    LoadedData data;
    const std::string yields_path = resolve(opt.yields, cfg, "yields", std::string{});
    if (yields_path.empty()) {
        if (need_yields) {
            throw Error(ErrorCode::domain,
                        "yields CSV required (flag --yields or config 'yields')");
        }
        data.dataset.futures = std::move(futures);
        return data;
    }
    YieldPanel yields = load_yields_csv(yields_path, yields_ingestion(opt, cfg));
    run.add_input("yields", yields_path);
    data.dataset = align_panels(futures, yields);
    data.has_yields = true;
    return data;
}

int cmd_extract_factors(const Options& opt, const json& cfg) {
    const fs::path out_dir = resolve(opt.output, cfg, "output", std::string("out"));
    RunWriter run("extract-factors", out_dir);

    const std::string yields_path = require_input(opt.yields, cfg, "yields", "yields CSV");
    const YieldPanel yields = load_yields_csv(yields_path, yields_ingestion(opt, cfg));
    run.add_input("yields", yields_path);

    const int q = resolve(opt.q, cfg, "Q", 2);
    const KernelSpec spec = resolve_kernel(opt, cfg);
    const double eigen_tol = config_get(cfg, "eigen_tolerance", 1e-10);
    const bool center = config_get(cfg, "center_kernel", false);
    const std::uint64_t seed = resolve(opt.seed, cfg, "seed", std::uint64_t{0});

    const KpcaModel model = fit_kpca(yields, spec, q, eigen_tol, center);
    const FactorScores scores = factor_scores(model, yields);

    run.emit("factors.csv", factors_csv(scores));
    run.emit("kpca_model.json", kpca_model_to_json(model));

    json resolved;
    resolved["command"] = "extract-factors";
    resolved["yields"] = yields_path;
    resolved["Q"] = q;
    resolved["kernel"] = spec.kind == KernelKind::rbf ? "rbf" : "linear";
    if (spec.bandwidth) resolved["bandwidth"] = *spec.bandwidth;
    resolved["eigen_tolerance"] = eigen_tol;
    resolved["center_kernel"] = center;
    resolved["seed"] = seed;
    run.finish(resolved, seed);
    return 0;
}

int cmd_fit(const Options& opt, const json& cfg) {
    const fs::path out_dir = resolve(opt.output, cfg, "output", std::string("out"));
    RunWriter run("fit", out_dir);

    const int q = resolve(opt.q, cfg, "Q", 2);
    const LoadedData data = load_dataset(opt, cfg, q > 0, run);

    FitConfig fit_config;
    fit_config.Q = q;
    fit_config.n_starts = resolve(opt.n_starts, cfg, "n_starts", 8);
    fit_config.seed = resolve(opt.seed, cfg, "seed", std::uint64_t{0});
    fit_config.max_iter = resolve(opt.max_iter, cfg, "max_iter", 5000);
    fit_config.tol = resolve(opt.tol, cfg, "tol", 1e-8);
    if (cfg.contains("sigma_groups")) {
        fit_config.sigma_groups = config_get(cfg, "sigma_groups", std::vector<int>{});
    }

    std::optional<KpcaModel> kpca;
    std::optional<FactorScores> scores;
    KernelSpec spec = resolve_kernel(opt, cfg);
    if (q > 0) {
        const double eigen_tol = config_get(cfg, "eigen_tolerance", 1e-10);
        const bool center = config_get(cfg, "center_kernel", false);
        kpca = fit_kpca(data.dataset.yields, spec, q, eigen_tol, center);
        scores = factor_scores(*kpca, data.dataset.yields);
    }

    const FitResult result =
        fit_mle(data.dataset, scores ? &*scores : nullptr, fit_config);
    const FilterOutput output =
        run_filter(data.dataset, result.params, scores ? &*scores : nullptr,
                   default_filter_config(data.dataset.futures));

    run.emit("fitted_model.json", fit_result_to_json(result));
    run.emit("filtered_states.csv", states_csv(data.dataset.futures.dates, output.a_filt));
    if (kpca) {
        run.emit("kpca_model.json", kpca_model_to_json(*kpca));
        run.emit("factors.csv", factors_csv(*scores));
    }

    json resolved;
    resolved["command"] = "fit";
    resolved["futures"] = resolve(opt.futures, cfg, "futures", std::string{});
    if (data.has_yields) resolved["yields"] = resolve(opt.yields, cfg, "yields", std::string{});
    resolved["Q"] = q;
    resolved["n_starts"] = fit_config.n_starts;
    resolved["seed"] = fit_config.seed;
    resolved["max_iter"] = fit_config.max_iter;
    resolved["tol"] = fit_config.tol;
    if (q > 0) {
        resolved["kernel"] = spec.kind == KernelKind::rbf ? "rbf" : "linear";
        if (spec.bandwidth) resolved["bandwidth"] = *spec.bandwidth;
    }
    run.finish(resolved, fit_config.seed);
    return 0;
}

int cmd_simulate(const Options& opt, const json& cfg) {
    const fs::path out_dir = resolve(opt.output, cfg, "output", std::string("out"));
    RunWriter run("simulate", out_dir);

    const std::vector<int> tenor_months =
        config_get(cfg, "tenors", std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    std::vector<Tenor> tenors;
    tenors.reserve(tenor_months.size());
    for (int m : tenor_months) tenors.emplace_back(m);

    ModelParams params;
    const std::string params_path = resolve(opt.params_file, cfg, "params", std::string{});
    if (!params_path.empty()) {
        params = model_params_from_json(read_text_file(params_path));
        run.add_input("params", params_path);
    } else {
        params.meas_std = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(tenors.size()), 0.05);
        params.Gamma.resize(params.meas_std.size(), 0);
    }
    if (params.n_tenors() != static_cast<Eigen::Index>(tenors.size())) {
        throw Error(ErrorCode::domain, "parameter file expects " +
                                           std::to_string(params.n_tenors()) +
                                           " tenors, got " + std::to_string(tenors.size()));
    }

    const std::uint64_t seed = resolve(opt.seed, cfg, "seed", std::uint64_t{0});
    const double dt = resolve(opt.dt, cfg, "dt", 1.0 / 12.0);
    StateVector x0;
    if (cfg.contains("x0")) {
        const auto x0_vec = config_get(cfg, "x0", std::vector<double>{});
        if (x0_vec.size() != 2) throw Error(ErrorCode::parse, "config 'x0' must be [chi, xi]");
        x0 = StateVector{x0_vec[0], x0_vec[1]};
    }

    std::optional<Eigen::MatrixXd> u_series;
    int n_steps = resolve(opt.n_steps, cfg, "n_steps", 120);
    MonthStamp start = MonthStamp::parse(resolve(opt.start, cfg, "start", std::string("2000-01")));
    const std::string factors_path = resolve(opt.factors_file, cfg, "factors", std::string{});
    if (params.Q > 0) {
        if (factors_path.empty()) {
            throw Error(ErrorCode::domain, "factor scores required when Q > 0 (flag --factors)");
        }
        const FactorScores scores = load_factors_csv(factors_path);
        run.add_input("factors", factors_path);
        for (std::size_t t = 1; t < scores.dates.size(); ++t) {
            if (scores.dates[t].months_since(scores.dates[t - 1]) != 1) {
                throw Error(ErrorCode::domain, "factor dates must be consecutive months");
            }
        }
        // The factor calendar drives the simulation so panel and scores align.
        start = scores.dates.front();
        n_steps = static_cast<int>(scores.dates.size());
        u_series = scores.U;
    } else if (!factors_path.empty()) {
        throw Error(ErrorCode::domain, "factor file given but the parameter set has Q = 0");
    }

    const SimulationResult sim =
        simulate(params, tenors, n_steps, dt, u_series, seed, start, x0);

    save_futures_csv(run.dir() / "futures.csv", sim.panel);
    run.record_output("futures.csv");
    Eigen::MatrixXd states(sim.states.size(), 2);
    for (std::size_t t = 0; t < sim.states.size(); ++t) {
        states(static_cast<Eigen::Index>(t), 0) = sim.states[t].chi;
        states(static_cast<Eigen::Index>(t), 1) = sim.states[t].xi;
    }
    run.emit("states.csv", states_csv(sim.panel.dates, states));

    json resolved;
    resolved["command"] = "simulate";
    if (!params_path.empty()) resolved["params"] = params_path;
    if (!factors_path.empty()) resolved["factors"] = factors_path;
    resolved["tenors"] = tenor_months;
    resolved["n_steps"] = n_steps;
    resolved["start"] = start.str();
    resolved["dt"] = dt;
    resolved["seed"] = seed;
    run.finish(resolved, seed);
    return 0;
}

int cmd_evaluate(const Options& opt, const json& cfg) {
    const fs::path out_dir = resolve(opt.output, cfg, "output", std::string("out"));
    RunWriter run("evaluate", out_dir);

    const std::string ss_path = resolve(opt.ss_model_file, cfg, "ss-model", std::string{});
    const std::string fr_path = resolve(opt.fr_model_file, cfg, "fr-model", std::string{});
    if (ss_path.empty() && fr_path.empty()) {
        throw Error(ErrorCode::domain, "at least one of --ss-model / --fr-model is required");
    }

    const LoadedData data = load_dataset(opt, cfg, !fr_path.empty(), run);
    const FittedStateKind kind =
        opt.use_filtered ? FittedStateKind::filtered : FittedStateKind::predicted;
    const std::uint64_t seed = resolve(opt.seed, cfg, "seed", std::uint64_t{0});
    const Eigen::MatrixXd& y = data.dataset.futures.log_prices;

    std::optional<RmseTable> ss_rmse;
    if (!ss_path.empty()) {
        const ModelParams params = model_params_from_json(read_text_file(ss_path));
        run.add_input("ss-model", ss_path);
        if (params.Q != 0) {
            throw Error(ErrorCode::domain, "--ss-model must have Q = 0");
        }
        const FilterOutput output = run_filter(data.dataset, params, nullptr,
                                               default_filter_config(data.dataset.futures));
        const StateSpaceMatrices matrices =
            state_space(params, data.dataset.futures.tenors, data.dataset.dt);
        const Eigen::MatrixXd fitted =
            fitted_log_prices(output, matrices, params.Gamma, nullptr, kind);
        ss_rmse = rmse_table(y, fitted);
    }

    std::optional<RmseTable> fr_rmse;
    KernelSpec spec = resolve_kernel(opt, cfg);
    if (!fr_path.empty()) {
        const ModelParams params = model_params_from_json(read_text_file(fr_path));
        run.add_input("fr-model", fr_path);
        if (params.Q < 1) {
            throw Error(ErrorCode::domain, "--fr-model must have Q > 0");
        }
        std::optional<KpcaModel> kpca;
        const std::string kpca_path = resolve(opt.kpca_file, cfg, "kpca-model", std::string{});
        if (!kpca_path.empty()) {
            kpca = kpca_model_from_json(read_text_file(kpca_path));
            run.add_input("kpca-model", kpca_path);
            if (kpca->n_factors() != params.Q) {
                throw Error(ErrorCode::domain, "kPCA model factor count does not match Q");
            }
        } else {
            const double eigen_tol = config_get(cfg, "eigen_tolerance", 1e-10);
            const bool center = config_get(cfg, "center_kernel", false);
            kpca = fit_kpca(data.dataset.yields, spec, params.Q, eigen_tol, center);
        }
        const FactorScores scores = factor_scores(*kpca, data.dataset.yields);
        const FilterOutput output = run_filter(data.dataset, params, &scores,
                                               default_filter_config(data.dataset.futures));
        const StateSpaceMatrices matrices =
            state_space(params, data.dataset.futures.tenors, data.dataset.dt);
        const Eigen::MatrixXd fitted =
            fitted_log_prices(output, matrices, params.Gamma, &scores, kind);
        fr_rmse = rmse_table(y, fitted);

        run.emit("functional_component.csv",
                 panel_csv(data.dataset.futures.dates, data.dataset.futures.tenors,
                           functional_component(params.Gamma, scores)));

        const CoefficientCurve curve = coefficient_curves(params.Gamma, *kpca);
        std::string coef = "tenor";
        for (const Tenor& t : data.dataset.futures.tenors) {
            coef += ",m" + std::to_string(t.months());
        }
        coef += '\n';
        for (std::size_t j = 0; j < curve.tenor_grid.size(); ++j) {
            coef += std::to_string(curve.tenor_grid[j].months());
            for (Eigen::Index i = 0; i < curve.gamma_values.rows(); ++i) {
                coef += ',' + format_value(curve.gamma_values(i, static_cast<Eigen::Index>(j)));
            }
            coef += '\n';
        }
        run.emit("coefficients.csv", coef);
    }

    std::string rmse = "tenor";
    if (ss_rmse) rmse += ",ss_rmse";
    if (fr_rmse) rmse += ",fr_rmse";
    rmse += '\n';
    for (Eigen::Index i = 0; i < data.dataset.futures.n_tenors(); ++i) {
        rmse += "m" + std::to_string(
                          data.dataset.futures.tenors[static_cast<std::size_t>(i)].months());
        if (ss_rmse) rmse += ',' + format_value(ss_rmse->per_tenor(i));
        if (fr_rmse) rmse += ',' + format_value(fr_rmse->per_tenor(i));
        rmse += '\n';
    }
    rmse += "mean";
    if (ss_rmse) rmse += ',' + format_value(ss_rmse->mean);
    if (fr_rmse) rmse += ',' + format_value(fr_rmse->mean);
    rmse += '\n';
    run.emit("rmse.csv", rmse);

    if (data.has_yields) {
        const Tenor short_tenor = data.dataset.yields.tenors.front();
        const Tenor long_tenor = data.dataset.yields.tenors.back();
        const std::vector<Regime> regimes =
            contango_indicator(data.dataset.yields, short_tenor, long_tenor);
        std::string regime = "date,indicator\n";
        for (std::size_t t = 0; t < regimes.size(); ++t) {
            regime += data.dataset.yields.dates[t].str();
            regime += ',';
            regime += regime_name(regimes[t]);
            regime += '\n';
        }
        run.emit("regime.csv", regime);
    }

    json resolved;
    resolved["command"] = "evaluate";
    resolved["futures"] = resolve(opt.futures, cfg, "futures", std::string{});
    if (data.has_yields) resolved["yields"] = resolve(opt.yields, cfg, "yields", std::string{});
    if (!ss_path.empty()) resolved["ss-model"] = ss_path;
    if (!fr_path.empty()) resolved["fr-model"] = fr_path;
    resolved["fitted_states"] = opt.use_filtered ? "filtered" : "predicted";
    resolved["seed"] = seed;
    run.finish(resolved, seed);
    return 0;
}

int cmd_stress(const Options& opt, const json& cfg) {
    const fs::path out_dir = resolve(opt.output, cfg, "output", std::string("out"));
    RunWriter run("stress", out_dir);

    const std::string model_path = require_input(opt.model_file, cfg, "model", "fitted model");
    const ModelParams params = model_params_from_json(read_text_file(model_path));
    run.add_input("model", model_path);

    const LoadedData data = load_dataset(opt, cfg, true, run);

    ShockScenario scenario;
    const std::string kind = resolve(opt.shock_kind, cfg, "kind", std::string{});
    if (kind == "temporary") {
        scenario.kind = ShockKind::temporary;
    } else if (kind == "permanent") {
        scenario.kind = ShockKind::permanent;
    } else {
        throw Error(ErrorCode::domain, "--kind must be 'temporary' or 'permanent'");
    }
    const std::string start = resolve(opt.shock_start, cfg, "start", std::string{});
    if (start.empty()) throw Error(ErrorCode::domain, "--start YYYY-MM is required");
    scenario.start = MonthStamp::parse(start);
    const std::string end = resolve(opt.shock_end, cfg, "end", std::string{});
    if (!end.empty()) scenario.end = MonthStamp::parse(end);
    scenario.multiplier = resolve(opt.multiplier, cfg, "multiplier", 2.0);
    const std::uint64_t seed = resolve(opt.seed, cfg, "seed", std::uint64_t{0});

    StressOptions stress_options;
    stress_options.freeze_kpca = opt.freeze_kpca || config_get(cfg, "freeze_kpca", false);
    const KernelSpec spec = resolve_kernel(opt, cfg);

    const StressRun result = stress_run(data.dataset, params, spec, scenario, stress_options);
    const StressReport report =
        bucket_report(result.base_prices, result.shocked_prices, data.dataset.futures.dates,
                      data.dataset.futures.tenors);

    std::string csv = "date,bucket,mean_diff,ci_low,ci_high\n";
    for (Eigen::Index t = 0; t < report.mean_diff.rows(); ++t) {
        for (Eigen::Index b = 0; b < report.mean_diff.cols(); ++b) {
            csv += report.dates[static_cast<std::size_t>(t)].str();
            csv += ',' + report.buckets[static_cast<std::size_t>(b)].label;
            csv += ',' + format_value(report.mean_diff(t, b));
            csv += ',' + format_value(report.ci_low(t, b));
            csv += ',' + format_value(report.ci_high(t, b));
            csv += '\n';
        }
    }
    run.emit("stress_report.csv", csv);

    json meta;
    meta["scenario"]["kind"] = kind;
    meta["scenario"]["start"] = scenario.start.str();
    if (scenario.end) meta["scenario"]["end"] = scenario.end->str();
    meta["scenario"]["multiplier"] = scenario.multiplier;
    meta["freeze_kpca"] = stress_options.freeze_kpca;
    meta["kernel"] = spec.kind == KernelKind::rbf ? "rbf" : "linear";
    if (spec.bandwidth) meta["bandwidth"] = *spec.bandwidth;
    meta["ci_method"] =
        "normal approximation across the bucket's contracts at each date: mean +/- 1.96 sd/sqrt(n)";
    meta["buckets"] = json::array({"(0,4] months", "(4,8] months", "(8,12] months"});
    run.emit("stress_meta.json", meta.dump(2) + "\n");

    json resolved;
    resolved["command"] = "stress";
    resolved["futures"] = resolve(opt.futures, cfg, "futures", std::string{});
    resolved["yields"] = resolve(opt.yields, cfg, "yields", std::string{});
    resolved["model"] = model_path;
    resolved["scenario"] = meta["scenario"];
    resolved["freeze_kpca"] = stress_options.freeze_kpca;
    resolved["seed"] = seed;
    run.finish(resolved, seed);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Futures term-structure estimation with yield-curve factors"};
    app.set_version_flag("--version", std::string("ssfr ") + kVersion);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_file,
                        "JSON config file; explicit flags take precedence");
        sub->add_option("--output,-o", opt.output, "output directory (default: out)");
        sub->add_option("--seed", opt.seed, "master seed for all randomness (default: 0)");
    };
    auto add_data = [&opt](CLI::App* sub, bool futures, bool yields) {
        if (futures) sub->add_option("--futures", opt.futures, "futures prices CSV (USD)");
        if (yields) {
            sub->add_option("--yields", opt.yields, "yield curve CSV (decimal fractions)");
            sub->add_flag("--yields-in-percent", opt.yields_percent,
                          "yield file stores percent values");
        }
    };
    auto add_kernel = [&opt](CLI::App* sub) {
        sub->add_option("--kernel", opt.kernel, "kernel kind: rbf | linear (default: rbf)");
        sub->add_option("--bandwidth", opt.bandwidth,
                        "rbf bandwidth (default: median pairwise distance)");
    };

    CLI::App* fit = app.add_subcommand("fit", "maximum-likelihood calibration");
    add_common(fit);
    add_data(fit, true, true);
    add_kernel(fit);
    fit->add_option("--Q", opt.q, "number of yield factors; 0 = pure two-factor model");
    fit->add_option("--n-starts", opt.n_starts, "optimizer starts (default: 8)");
    fit->add_option("--max-iter", opt.max_iter, "iteration budget per start (default: 5000)");
    fit->add_option("--tol", opt.tol, "simplex spread tolerance (default: 1e-8)");

    CLI::App* simulate = app.add_subcommand("simulate", "draw a synthetic futures panel");
    add_common(simulate);
    simulate->add_option("--params", opt.params_file, "model parameter JSON");
    simulate->add_option("--factors", opt.factors_file, "factor scores CSV (required when Q > 0)");
    simulate->add_option("--n-steps", opt.n_steps, "number of monthly observations (default: 120)");
    simulate->add_option("--start", opt.start, "first month, YYYY-MM (default: 2000-01)");
    simulate->add_option("--dt", opt.dt, "time step in years (default: 1/12)");

    CLI::App* extract = app.add_subcommand("extract-factors", "kernel-PCA yield factors");
    add_common(extract);
    add_data(extract, false, true);
    add_kernel(extract);
    extract->add_option("--Q", opt.q, "number of factors to keep (default: 2)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "in-sample diagnostics for fitted models");
    add_common(evaluate);
    add_data(evaluate, true, true);
    add_kernel(evaluate);
    evaluate->add_option("--ss-model", opt.ss_model_file, "fitted model JSON with Q = 0");
    evaluate->add_option("--fr-model", opt.fr_model_file, "fitted model JSON with Q > 0");
    evaluate->add_option("--kpca-model", opt.kpca_file,
                         "reuse a fitted kPCA JSON instead of refitting");
    evaluate->add_flag("--use-filtered", opt.use_filtered,
                       "fitted values from filtered states instead of one-step-ahead");

    CLI::App* stress = app.add_subcommand("stress", "yield-shock scenario pipeline");
    add_common(stress);
    add_data(stress, true, true);
    add_kernel(stress);
    stress->add_option("--model", opt.model_file, "fitted model JSON (Q > 0)");
    stress->add_option("--kind", opt.shock_kind, "temporary | permanent");
    stress->add_option("--start", opt.shock_start, "first shocked month, YYYY-MM");
    stress->add_option("--end", opt.shock_end, "last shocked month (temporary only)");
    stress->add_option("--multiplier", opt.multiplier, "yield multiplier (default: 2.0)");
    stress->add_flag("--freeze-kpca", opt.freeze_kpca,
                     "keep the base-data kPCA basis instead of refitting on shocked yields");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "E_PARSE: " << e.what() << "\n";
        return 1;
    }

    try {
        const json cfg = load_config(opt.config_file);
        if (app.got_subcommand(fit)) return cmd_fit(opt, cfg);
        if (app.got_subcommand(simulate)) return cmd_simulate(opt, cfg);
        if (app.got_subcommand(extract)) return cmd_extract_factors(opt, cfg);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(opt, cfg);
        if (app.got_subcommand(stress)) return cmd_stress(opt, cfg);
        std::cerr << "E_DOMAIN: no subcommand given\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << e.code_name() << ": " << e.what() << "\n";
        return e.code() == ErrorCode::numeric ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "E_NUMERIC: internal error: " << e.what() << "\n";
        return 2;
    }
}
