// SPDX-License-Identifier: Apache-2.0
//
// jpsem: joint-processing semantic transmission simulator
// Copyright (C) 2026 The jpsem authors
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

#include "jpsem/csv.hpp"
#include "jpsem/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>

namespace jpsem::csv
{

Row split(const std::string &line)
{
    Row out;
    std::string cur;
    for (char c : line)
    {
        if (c == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (c != '\r')
            cur.push_back(c);
    }
    out.push_back(cur);
    for (auto &f : out)
    {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    return out;
}

double to_double(const std::string &field)
{
    if (field == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    const char *first = field.data();
    const char *last = first + field.size();
    if (!field.empty() && *first == '+')
        ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last || field.empty())
        throw IoError("invalid numeric field '" + field + "'");
    return v;
}

std::string format(double value)
{
    if (std::isnan(value))
        return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, r.ptr);
}

std::vector<Row> read_file(const std::string &path, const Row &expected_header)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::string line;
    bool header_seen = false;
    std::vector<Row> rows;
    while (std::getline(in, line))
    {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        Row r = split(line);
        if (!header_seen)
        {
            if (r != expected_header)
            {
                std::string want;
                for (const auto &h : expected_header)
                    want += (want.empty() ? "" : ",") + h;
                throw IoError("'" + path + "': expected header '" + want + "'");
            }
            header_seen = true;
            continue;
        }
        if (r.size() != expected_header.size())
            throw IoError("'" + path + "': row has " + std::to_string(r.size()) + " fields");
        rows.push_back(std::move(r));
    }
    if (!header_seen)
        throw IoError("'" + path + "' is empty");
    return rows;
}

} // namespace jpsem::csv
