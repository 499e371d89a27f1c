// SPDX-License-Identifier: Apache-2.0
//
// ris-corr: spatial-temporal correlation and degrees of freedom of RIS arrays
// Copyright (C) 2026 The ris-corr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#ifndef RIS_CLI_TABLE_HPP
#define RIS_CLI_TABLE_HPP

#include "../error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ris::cli {

enum class TableFormat { csv, json };

inline TableFormat parse_table_format(std::string_view text)
{
    if (text == "csv")
        return TableFormat::csv;
    if (text == "json")
        return TableFormat::json;
    throw invalid_parameter("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

inline const char* to_string(TableFormat f) noexcept { return f == TableFormat::csv ? "csv" : "json"; }

// Numeric long-form table. `config` is echoed into the file header.
struct Table {
    std::string title;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row)
    {
        if (row.size() != columns.size())
            throw invalid_parameter("table '" + title + "': row width does not match the header");
        rows.push_back(std::move(row));
    }
};

// 17 significant digits, '.' separator independent of the locale.
inline std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                             std::numeric_limits<double>::max_digits10);
    return {buf, res.ptr};
}

inline double parse_number(std::string_view text)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw invalid_parameter("cannot parse number '" + std::string(text) + "'");
    return v;
}

inline constexpr std::string_view config_prefix = "# config: ";

inline void write_csv(std::ostream& os, const Table& t)
{
    os << "# " << t.title << '\n';
    os << config_prefix << t.config.dump() << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << format_number(row[c]);
        os << '\n';
    }
}

inline nlohmann::json to_json(const Table& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double v : row)
            r.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
        rows.push_back(std::move(r));
    }
    return {{"title", t.title}, {"config", t.config}, {"columns", t.columns}, {"rows", std::move(rows)}};
}

// Writes through a temporary sibling and renames, so a failed write leaves no partial file.
inline void write_table(const Table& t, TableFormat format, const std::filesystem::path& path)
{
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".partial";
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os)
                throw io_error("cannot open '" + tmp.string() + "' for writing");
            if (format == TableFormat::csv)
                write_csv(os, t);
            else
                os << to_json(t).dump(1) << '\n';
            os.flush();
            if (!os)
                throw io_error("write to '" + tmp.string() + "' failed");
        }
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec)
            throw io_error("cannot move output into '" + path.string() + "': " + ec.message());
    } catch (...) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw;
    }
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

} // namespace detail

inline Table read_csv_table(std::istream& is)
{
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.rfind(config_prefix, 0) == 0) {
            t.config = nlohmann::json::parse(line.substr(config_prefix.size()));
        } else if (line.rfind("# ", 0) == 0) {
            t.title = line.substr(2);
        } else if (!header) {
            for (auto col : detail::split(line, ','))
                t.columns.emplace_back(col);
            header = true;
        } else if (!line.empty()) {
            std::vector<double> row;
            for (auto cell : detail::split(line, ','))
                row.push_back(parse_number(cell));
            t.add_row(std::move(row));
        }
    }
    return t;
}

inline Table read_csv_table(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open '" + path.string() + "'");
    return read_csv_table(is);
}

inline Table read_json_table(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw io_error("cannot open '" + path.string() + "'");
    const auto j = nlohmann::json::parse(is);
    Table t;
    t.title = j.at("title").get<std::string>();
    t.config = j.at("config");
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<double> row;
        for (const auto& v : r)
            row.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        t.add_row(std::move(row));
    }
    return t;
}

} // namespace ris::cli

#endif
