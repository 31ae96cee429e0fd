// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>

#include "ssfr/errors.hpp"

namespace ssfr {

/// Constant time-to-maturity of a generic (rolled) contract or yield point,
/// in whole months. Columns of a panel are identified by tenor.
class Tenor {
  public:
    explicit Tenor(int months) : months_(months) {
        if (months < 1)
            throw Error(ErrorCode::domain, "tenor must be at least 1 month");
    }

    int months() const { return months_; }

    /// Year fraction used by the pricing formulas (12 months = 1).
    double years() const { return months_ / 12.0; }

    auto operator<=>(const Tenor&) const = default;

  private:
    int months_;
};

}  // namespace ssfr
