// SPDX-License-Identifier: Apache-2.0
#include "ssfr/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "ssfr/errors.hpp"

namespace ssfr {

namespace {

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

bool is_missing(const std::string& cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan";
}

double parse_value(const std::string& cell, const std::string& context) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw Error(ErrorCode::parse, "unparseable value '" + cell + "' " + context);
    return value;
}

struct RawPanel {
    std::vector<MonthStamp> dates;
    std::vector<Tenor> tenors;
    Eigen::MatrixXd values;  // dates x tenors
};

// Shared CSV reader: header `date,m<k>,...`, one row per month, rows with a
// missing cell dropped, duplicate dates rejected, rows reordered by date.
RawPanel read_panel_csv(const std::filesystem::path& path, const IngestionConfig& config) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "file not found: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::parse, "empty file: " + path.string());

    const auto header = split_line(line);
    if (header.empty() || header[0] != "date")
        throw Error(ErrorCode::parse, "first header column must be 'date' in " + path.string());

    std::vector<int> tenor_months;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto& h = header[c];
        if (h.size() < 2 || h[0] != 'm')
            throw Error(ErrorCode::parse, "bad tenor header '" + h + "' in " + path.string());
        int months = 0;
        auto [ptr, ec] = std::from_chars(h.data() + 1, h.data() + h.size(), months);
        if (ec != std::errc{} || ptr != h.data() + h.size() || months < 1)
            throw Error(ErrorCode::parse, "bad tenor header '" + h + "' in " + path.string());
        tenor_months.push_back(months);
    }
    if (tenor_months.empty())
        throw Error(ErrorCode::parse, "no tenor columns in " + path.string());

    for (int required : config.required_tenors)
        if (std::find(tenor_months.begin(), tenor_months.end(), required) == tenor_months.end())
            throw Error(ErrorCode::parse, "missing tenor column m" + std::to_string(required) +
                                              " in " + path.string());

    struct Row {
        MonthStamp date;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::parse, "ragged row at line " + std::to_string(line_no) +
                                              " in " + path.string());
        Row row;
        row.date = MonthStamp::parse(cells[0]);
        bool missing = false;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (is_missing(cells[c])) {
                missing = true;
                break;
            }
            row.values.push_back(parse_value(
                cells[c], "at line " + std::to_string(line_no) + " in " + path.string()));
        }
        if (!missing) rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw Error(ErrorCode::parse, "no complete rows in " + path.string());

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].date == rows[i - 1].date)
            throw Error(ErrorCode::parse,
                        "duplicate date " + rows[i].date.str() + " in " + path.string());

    // Column order follows tenor order, whatever the file order was.
    std::vector<std::size_t> order(tenor_months.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return tenor_months[a] < tenor_months[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (tenor_months[order[i]] == tenor_months[order[i - 1]])
            throw Error(ErrorCode::parse, "duplicate tenor column m" +
                                              std::to_string(tenor_months[order[i]]) + " in " +
                                              path.string());

    RawPanel out;
    out.tenors.reserve(order.size());
    for (std::size_t j : order) out.tenors.emplace_back(tenor_months[j]);
    out.dates.reserve(rows.size());
    out.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(order.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.dates.push_back(rows[r].date);
        for (std::size_t j = 0; j < order.size(); ++j)
            out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                rows[r].values[order[j]];
    }
    return out;
}

}  // namespace

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

FuturesPanel load_futures_csv(const std::filesystem::path& path, const IngestionConfig& config) {
    RawPanel raw = read_panel_csv(path, config);
    FuturesPanel panel;
    panel.dates = std::move(raw.dates);
    panel.tenors = std::move(raw.tenors);
    panel.log_prices.resize(raw.values.rows(), raw.values.cols());
    for (Eigen::Index r = 0; r < raw.values.rows(); ++r)
        for (Eigen::Index c = 0; c < raw.values.cols(); ++c) {
            const double price = raw.values(r, c);
            if (!(price > 0.0))
                throw Error(ErrorCode::domain,
                            "non-positive price " + format_value(price) + " at " +
                                panel.dates[static_cast<std::size_t>(r)].str() + " m" +
                                std::to_string(panel.tenors[static_cast<std::size_t>(c)].months()) +
                                " in " + path.string());
            panel.log_prices(r, c) = std::log(price);
        }
    panel.validate();
    return panel;
}

YieldPanel load_yields_csv(const std::filesystem::path& path, const IngestionConfig& config) {
    RawPanel raw = read_panel_csv(path, config);
    YieldPanel panel;
    panel.dates = std::move(raw.dates);
    panel.tenors = std::move(raw.tenors);
    const double scale = config.values_in_percent ? 0.01 : 1.0;
    panel.yields = (raw.values * scale).transpose();
    panel.validate();
    return panel;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::io, "cannot write file: " + path.string());
    return out;
}

void write_header(std::ofstream& out, const std::vector<Tenor>& tenors) {
    out << "date";
    for (const auto& t : tenors) out << ",m" << t.months();
    out << "\n";
}

}  // namespace

void save_futures_csv(const std::filesystem::path& path, const FuturesPanel& panel) {
    panel.validate();
    auto out = open_for_write(path);
    write_header(out, panel.tenors);
    for (Eigen::Index r = 0; r < panel.n_dates(); ++r) {
        out << panel.dates[static_cast<std::size_t>(r)].str();
        for (Eigen::Index c = 0; c < panel.n_tenors(); ++c)
            out << ',' << format_value(std::exp(panel.log_prices(r, c)));
        out << "\n";
    }
}

void save_yields_csv(const std::filesystem::path& path, const YieldPanel& panel, bool as_percent) {
    panel.validate();
    auto out = open_for_write(path);
    write_header(out, panel.tenors);
    const double scale = as_percent ? 100.0 : 1.0;
    for (Eigen::Index t = 0; t < panel.n_dates(); ++t) {
        out << panel.dates[static_cast<std::size_t>(t)].str();
        for (Eigen::Index i = 0; i < panel.n_tenors(); ++i)
            out << ',' << format_value(panel.yields(i, t) * scale);
        out << "\n";
    }
}

}  // namespace ssfr
