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

#include "jpsem/toml_lite.hpp"
#include "jpsem/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace jpsem::toml
{

bool Value::is_number() const
{
    return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
}

double Value::as_double() const
{
    if (const auto *i = std::get_if<std::int64_t>(&data))
        return static_cast<double>(*i);
    if (const auto *d = std::get_if<double>(&data))
        return *d;
    throw ConfigError("expected a number");
}

std::int64_t Value::as_integer() const
{
    if (const auto *i = std::get_if<std::int64_t>(&data))
        return *i;
    throw ConfigError("expected an integer");
}

bool Value::as_bool() const
{
    if (const auto *b = std::get_if<bool>(&data))
        return *b;
    throw ConfigError("expected a boolean");
}

const std::string &Value::as_string() const
{
    if (const auto *s = std::get_if<std::string>(&data))
        return *s;
    throw ConfigError("expected a string");
}

const Value::Array &Value::as_array() const
{
    if (const auto *a = std::get_if<Array>(&data))
        return *a;
    throw ConfigError("expected an array");
}

namespace
{

class Parser
{
public:
    explicit Parser(const std::string &text) : src_(text) {}

    Document run()
    {
        Document doc;
        std::string table;
        doc[table];
        while (true)
        {
            skip_blank(true);
            if (eof())
                break;
            if (peek() == '[')
            {
                ++pos_;
                const auto start = pos_;
                while (!eof() && peek() != ']' && peek() != '\n')
                    ++pos_;
                if (eof() || peek() != ']')
                    fail("unterminated table header");
                table = trim(src_.substr(start, pos_ - start));
                ++pos_;
                if (table.empty())
                    fail("empty table name");
                doc[table];
                expect_line_end();
                continue;
            }
            const std::string key = read_key();
            skip_blank(false);
            if (eof() || peek() != '=')
                fail("expected '=' after key '" + key + "'");
            ++pos_;
            skip_blank(false);
            Value v = read_value();
            auto &t = doc[table];
            if (t.count(key))
                fail("duplicate key '" + key + "'");
            t.emplace(key, std::move(v));
            expect_line_end();
        }
        return doc;
    }

private:
    const std::string &src_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    int line() const
    {
        int n = 1;
        for (std::size_t i = 0; i < pos_ && i < src_.size(); ++i)
            n += src_[i] == '\n';
        return n;
    }

    [[noreturn]] void fail(const std::string &msg) const
    {
        throw ConfigError("toml line " + std::to_string(line()) + ": " + msg);
    }

    static std::string trim(const std::string &s)
    {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    // Skips spaces and comments; with newlines=true also line breaks
    void skip_blank(bool newlines)
    {
        while (!eof())
        {
            const char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n'))
                ++pos_;
            else if (c == '#')
                while (!eof() && peek() != '\n')
                    ++pos_;
            else
                break;
        }
    }

    void expect_line_end()
    {
        skip_blank(false);
        if (!eof() && peek() != '\n')
            fail("unexpected trailing characters");
    }

    std::string read_key()
    {
        const auto start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
            ++pos_;
        if (pos_ == start)
            fail("expected a key");
        return src_.substr(start, pos_ - start);
    }

    Value read_value()
    {
        if (eof())
            fail("missing value");
        const char c = peek();
        if (c == '"')
            return Value{read_string()};
        if (c == '[')
            return Value{read_array()};
        if (src_.compare(pos_, 4, "true") == 0)
        {
            pos_ += 4;
            return Value{true};
        }
        if (src_.compare(pos_, 5, "false") == 0)
        {
            pos_ += 5;
            return Value{false};
        }
        return read_number();
    }

    std::string read_string()
    {
        ++pos_;
        std::string out;
        while (true)
        {
            if (eof() || peek() == '\n')
                fail("unterminated string");
            char c = src_[pos_++];
            if (c == '"')
                break;
            if (c == '\\')
            {
                if (eof())
                    fail("bad escape");
                const char e = src_[pos_++];
                switch (e)
                {
                case 'n': c = '\n'; break;
                case 't': c = '\t'; break;
                case '"': c = '"'; break;
                case '\\': c = '\\'; break;
                default: fail(std::string("unsupported escape \\") + e);
                }
            }
            out.push_back(c);
        }
        return out;
    }

    Value::Array read_array()
    {
        ++pos_;
        Value::Array out;
        while (true)
        {
            skip_blank(true);
            if (eof())
                fail("unterminated array");
            if (peek() == ']')
            {
                ++pos_;
                return out;
            }
            out.push_back(read_value());
            skip_blank(true);
            if (eof())
                fail("unterminated array");
            if (peek() == ',')
                ++pos_;
            else if (peek() != ']')
                fail("expected ',' or ']' in array");
        }
    }

    Value read_number()
    {
        const auto start = pos_;
        while (!eof())
        {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' || c == '_')
                ++pos_;
            else
                break;
        }
        std::string tok;
        for (auto i = start; i < pos_; ++i)
            if (src_[i] != '_')
                tok.push_back(src_[i]);
        if (tok.empty())
            fail("expected a value");
        std::string body = tok;
        if (body[0] == '+')
            body.erase(0, 1);
        if (body == "inf" || body == "-inf")
            return Value{body[0] == '-' ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity()};
        const bool is_float = body.find_first_of(".eE") != std::string::npos;
        const char *first = body.data();
        const char *last = body.data() + body.size();
        if (is_float)
        {
            double d = 0.0;
            auto [p, ec] = std::from_chars(first, last, d);
            if (ec != std::errc() || p != last)
                fail("invalid number '" + tok + "'");
            return Value{d};
        }
        std::int64_t i = 0;
        auto [p, ec] = std::from_chars(first, last, i);
        if (ec != std::errc() || p != last)
            fail("invalid number '" + tok + "'");
        return Value{i};
    }
};

} // namespace

Document parse(const std::string &text)
{
    return Parser(text).run();
}

Document parse_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace jpsem::toml
