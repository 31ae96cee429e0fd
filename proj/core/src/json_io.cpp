// SPDX-License-Identifier: Apache-2.0
#include "ssfr/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ssfr/errors.hpp"

namespace ssfr {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key) {
    if (!j.is_array()) throw Error(ErrorCode::parse, key + " must be an array of rows");
    const auto n_rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index n_cols = -1;
    Eigen::MatrixXd m;
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array()) throw Error(ErrorCode::parse, key + " rows must be arrays");
        if (n_cols < 0) {
            n_cols = static_cast<Eigen::Index>(row.size());
            m.resize(n_rows, n_cols);
        }
        if (static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw Error(ErrorCode::parse, key + " rows differ in length");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
    }
    if (n_rows == 0) m.resize(0, 0);
    return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& key) {
    if (!j.is_array()) throw Error(ErrorCode::parse, key + " must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

const json& require(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::parse, "missing field '" + key + "'");
    return *it;
}

json params_fields(const ModelParams& p) {
    json j;
    j["kappa_chi"] = p.kappa_chi;
    j["kappa_xi"] = p.kappa_xi;
    j["mu_xi"] = p.mu_xi;
    j["sigma_chi"] = p.sigma_chi;
    j["sigma_xi"] = p.sigma_xi;
    j["rho"] = p.rho;
    j["lambda_chi"] = p.lambda_chi;
    j["lambda_xi"] = p.lambda_xi;
    j["meas_std"] = vector_to_json(p.meas_std);
    j["Gamma"] = matrix_to_json(p.Gamma);
    j["Q"] = p.Q;
    return j;
}

ModelParams params_from_fields(const json& j) {
    ModelParams p;
    p.kappa_chi = require(j, "kappa_chi").get<double>();
    p.kappa_xi = require(j, "kappa_xi").get<double>();
    p.mu_xi = require(j, "mu_xi").get<double>();
    p.sigma_chi = require(j, "sigma_chi").get<double>();
    p.sigma_xi = require(j, "sigma_xi").get<double>();
    p.rho = require(j, "rho").get<double>();
    p.lambda_chi = require(j, "lambda_chi").get<double>();
    p.lambda_xi = require(j, "lambda_xi").get<double>();
    p.meas_std = vector_from_json(require(j, "meas_std"), "meas_std");
    p.Gamma = matrix_from_json(require(j, "Gamma"), "Gamma");
    p.Q = require(j, "Q").get<int>();
    if (p.Gamma.size() == 0) p.Gamma.resize(p.meas_std.size(), p.Q);
    p.validate();
    return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

std::string model_params_to_json(const ModelParams& params) {
    params.validate();
    return dump(params_fields(params));
}

ModelParams model_params_from_json(const std::string& text) {
    try {
        return params_from_fields(parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad parameter document: ") + e.what());
    }
}

std::string fit_result_to_json(const FitResult& result) {
    json j = params_fields(result.params);
    j["loglik"] = result.loglik;
    j["n_starts"] = result.n_starts;
    j["converged"] = result.converged;
    json trace = json::array();
    for (const StartTrace& t : result.trace) {
        json entry;
        entry["start_point"] = vector_to_json(t.start_point);
        entry["loglik"] = t.loglik;
        entry["iterations"] = t.iterations;
        entry["converged"] = t.converged;
        trace.push_back(std::move(entry));
    }
    j["trace"] = std::move(trace);
    return dump(j);
}

FitResult fit_result_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        FitResult result;
        result.params = params_from_fields(j);
        result.loglik = require(j, "loglik").get<double>();
        result.n_starts = require(j, "n_starts").get<int>();
        result.converged = require(j, "converged").get<bool>();
        for (const json& entry : require(j, "trace")) {
            StartTrace t;
            t.start_point = vector_from_json(require(entry, "start_point"), "start_point");
            t.loglik = require(entry, "loglik").get<double>();
            t.iterations = require(entry, "iterations").get<int>();
            t.converged = require(entry, "converged").get<bool>();
            result.trace.push_back(std::move(t));
        }
        return result;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad fit document: ") + e.what());
    }
}

std::string kpca_model_to_json(const KpcaModel& model) {
    json j;
    j["kind"] = model.spec.kind == KernelKind::rbf ? "rbf" : "linear";
    if (model.spec.bandwidth) j["bandwidth"] = *model.spec.bandwidth;
    j["centered"] = model.centered;
    if (model.centered) {
        j["center_means"] = vector_to_json(model.center_means);
        j["center_grand_mean"] = model.center_grand_mean;
    }
    json tenors = json::array();
    for (const Tenor& t : model.tenors) tenors.push_back(t.months());
    j["tenors_months"] = std::move(tenors);
    json rows = json::array();
    for (const Eigen::VectorXd& r : model.train_rows) rows.push_back(vector_to_json(r));
    j["train_rows"] = std::move(rows);
    j["K"] = matrix_to_json(model.K);
    j["eigenvalues"] = vector_to_json(model.eigenvalues);
    j["R"] = matrix_to_json(model.R);
    j["scores"] = matrix_to_json(model.scores);
    j["weights"] = matrix_to_json(model.weights);
    j["basis"] = matrix_to_json(model.basis);
    j["quadrature"] = vector_to_json(model.quadrature);
    return dump(j);
}

KpcaModel kpca_model_from_json(const std::string& text) {
    const json j = parse(text);
    try {
        KpcaModel model;
        const std::string kind = require(j, "kind").get<std::string>();
        if (kind == "rbf") {
            model.spec.kind = KernelKind::rbf;
        } else if (kind == "linear") {
            model.spec.kind = KernelKind::linear;
        } else {
            throw Error(ErrorCode::parse, "unknown kernel kind '" + kind + "'");
        }
        if (j.contains("bandwidth")) model.spec.bandwidth = j["bandwidth"].get<double>();
        if (model.spec.kind == KernelKind::rbf && !model.spec.bandwidth) {
            throw Error(ErrorCode::parse, "rbf model document lacks a bandwidth");
        }
        model.centered = require(j, "centered").get<bool>();
        if (model.centered) {
            model.center_means = vector_from_json(require(j, "center_means"), "center_means");
            model.center_grand_mean = require(j, "center_grand_mean").get<double>();
        }
        for (const json& t : require(j, "tenors_months")) {
            model.tenors.emplace_back(t.get<int>());
        }
        for (const json& r : require(j, "train_rows")) {
            model.train_rows.push_back(vector_from_json(r, "train_rows"));
        }
        model.K = matrix_from_json(require(j, "K"), "K");
        model.eigenvalues = vector_from_json(require(j, "eigenvalues"), "eigenvalues");
        model.R = matrix_from_json(require(j, "R"), "R");
        model.scores = matrix_from_json(require(j, "scores"), "scores");
        model.weights = matrix_from_json(require(j, "weights"), "weights");
        model.basis = matrix_from_json(require(j, "basis"), "basis");
        model.quadrature = vector_from_json(require(j, "quadrature"), "quadrature");
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse, std::string("bad kernel-PCA document: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write file: " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::io, "failed writing file: " + path.string());
}

}  // namespace ssfr
