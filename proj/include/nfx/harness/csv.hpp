// SPDX-License-Identifier: Apache-2.0
//
// nfx: near-field spatial-domain channel extrapolation for XL-MIMO arrays
// Copyright (C) 2026 The nfx Authors
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

#pragma once

// CSV output. Numbers use 9 significant digits; a missing value is an empty
// field.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nfx::csv {

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline std::string format_number(std::int64_t x) { return std::to_string(x); }
inline std::string format_number(int x) { return std::to_string(x); }

template <class T>
std::string field(const std::optional<T>& v) {
    return v ? format_number(*v) : std::string{};
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string join(const std::vector<std::string>& fields, char sep = ',') {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of(",\n\r\"") != std::string::npos)
            throw std::invalid_argument("csv: field contains a separator: " + fields[i]);
        if (i) out += sep;
        out += fields[i];
    }
    return out;
}

inline double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("csv: not a number: '" + s + "'");
    return v;
}

inline std::int64_t parse_int(const std::string& s) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("csv: not an integer: '" + s + "'");
    return v;
}

inline std::optional<double> optional_double(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<double>(parse_double(s));
}

inline std::optional<std::int64_t> optional_int(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::int64_t>(parse_int(s));
}

/// Accumulates rows in memory so a run can be written atomically.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    const std::vector<std::string>& header() const { return header_; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

    void add(std::vector<std::string> fields) {
        if (fields.size() != header_.size()) throw std::logic_error("csv: row width does not match header");
        rows_.push_back(std::move(fields));
    }

    void write(std::ostream& os) const {
        os << join(header_) << '\n';
        for (const auto& r : rows_) os << join(r) << '\n';
    }

    std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace nfx::csv

