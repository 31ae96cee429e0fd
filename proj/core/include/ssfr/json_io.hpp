// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "ssfr/estimate.hpp"
#include "ssfr/kpca.hpp"
#include "ssfr/model.hpp"

namespace ssfr {

/// Flat parameter document: one key per ModelParams field (kappa_chi,
/// kappa_xi, mu_xi, sigma_chi, sigma_xi, rho, lambda_chi, lambda_xi,
/// meas_std, Gamma, Q). Keys are emitted sorted, so equal inputs give
/// byte-equal documents.
std::string model_params_to_json(const ModelParams& params);

/// Accepts any document containing the flat parameter fields; extra keys
/// (e.g. a fit's loglik/trace) are ignored. Validates the result.
ModelParams model_params_from_json(const std::string& text);

/// Fit artifact: the flat parameter fields plus loglik, n_starts, converged
/// and the per-start trace. model_params_from_json can read it back.
std::string fit_result_to_json(const FitResult& result);
FitResult fit_result_from_json(const std::string& text);

/// Complete kernel-PCA state, including training rows, so projections and
/// factor scores can be reproduced without the original yield file.
std::string kpca_model_to_json(const KpcaModel& model);
KpcaModel kpca_model_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ssfr
