// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace ssfr {

/// Calendar month, the time granularity of all panels. Intra-month
/// day-of-quote is ignored: "2015-03-17" and "2015-03" are the same stamp.
class MonthStamp {
  public:
    MonthStamp() = default;
    MonthStamp(int year, int month);

    /// Parses ISO "YYYY-MM" or "YYYY-MM-DD" (day discarded).
    static MonthStamp parse(std::string_view text);

    int year() const { return index_ >= 0 ? index_ / 12 : (index_ - 11) / 12; }
    int month() const { return index_ - year() * 12 + 1; }

    /// "YYYY-MM"
    std::string str() const;

    MonthStamp plus_months(int n) const;

    /// Whole months from other to *this.
    int months_since(MonthStamp other) const { return index_ - other.index_; }

    auto operator<=>(const MonthStamp&) const = default;

  private:
    int index_ = 0;  // year * 12 + (month - 1)
};

}  // namespace ssfr
