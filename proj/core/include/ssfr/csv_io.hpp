// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ssfr/panels.hpp"

namespace ssfr {

/// Numeric cell format shared by every CSV writer: 12 significant digits,
/// enough for doubles to round-trip through text in these panels.
std::string format_value(double v);

/// How a raw file maps onto a panel. The file format itself is fixed:
/// UTF-8 CSV, first header `date` (ISO YYYY-MM or YYYY-MM-DD), remaining
/// headers `m1, m3, ...` naming tenors in months.
struct IngestionConfig {
    /// File stores percent (2.5 = 2.5%); converted to decimal fraction once at load.
    bool values_in_percent = false;
    /// When non-empty, these tenor columns must all be present.
    std::vector<int> required_tenors;
};

/// Loads raw USD futures prices and log-transforms them. Rows with any
/// missing cell are dropped (no imputation); a non-positive price is an error.
FuturesPanel load_futures_csv(const std::filesystem::path& path,
                              const IngestionConfig& config = {});

/// Loads annualized yields, one column per tenor, stored as decimal fractions.
YieldPanel load_yields_csv(const std::filesystem::path& path,
                           const IngestionConfig& config = {});

/// Writers emit the same layout the loaders accept, values at 12 significant
/// digits (futures back in raw USD prices).
void save_futures_csv(const std::filesystem::path& path, const FuturesPanel& panel);
void save_yields_csv(const std::filesystem::path& path, const YieldPanel& panel,
                     bool as_percent = false);

}  // namespace ssfr
