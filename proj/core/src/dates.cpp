// SPDX-License-Identifier: Apache-2.0
#include "ssfr/dates.hpp"

#include <charconv>
#include <cstdio>

#include "ssfr/errors.hpp"

namespace ssfr {

namespace {

int parse_int(std::string_view s, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::parse,
                    "unparseable date: bad " + std::string(what) + " in '" + std::string(s) + "'");
    return value;
}

}  // namespace

MonthStamp::MonthStamp(int year, int month) {
    if (month < 1 || month > 12)
        throw Error(ErrorCode::parse, "unparseable date: month out of range");
    index_ = year * 12 + (month - 1);
}

MonthStamp MonthStamp::parse(std::string_view text) {
    // YYYY-MM or YYYY-MM-DD
    if (text.size() != 7 && text.size() != 10)
        throw Error(ErrorCode::parse, "unparseable date '" + std::string(text) + "'");
    if (text[4] != '-' || (text.size() == 10 && text[7] != '-'))
        throw Error(ErrorCode::parse, "unparseable date '" + std::string(text) + "'");
    const int year = parse_int(text.substr(0, 4), "year");
    const int month = parse_int(text.substr(5, 2), "month");
    if (month < 1 || month > 12)
        throw Error(ErrorCode::parse, "unparseable date '" + std::string(text) + "'");
    if (text.size() == 10)
        (void)parse_int(text.substr(8, 2), "day");  // validated, then discarded
    return MonthStamp(year, month);
}

std::string MonthStamp::str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year(), month());
    return buf;
}

MonthStamp MonthStamp::plus_months(int n) const {
    MonthStamp out = *this;
    out.index_ += n;
    return out;
}

}  // namespace ssfr
