// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ssfr {

/// Error category, mapped to machine-parseable codes on the CLI surface.
enum class ErrorCode {
    io,       // missing/unreadable files
    parse,    // malformed input (CSV, JSON, dates)
    domain,   // values outside the model's domain (non-positive price, bad config)
    numeric,  // numerical failure (Cholesky breakdown, overflow)
};

constexpr const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::io: return "E_IO";
        case ErrorCode::parse: return "E_PARSE";
        case ErrorCode::domain: return "E_DOMAIN";
        case ErrorCode::numeric: return "E_NUMERIC";
    }
    return "E_UNKNOWN";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

  private:
    ErrorCode code_;
};

}  // namespace ssfr
