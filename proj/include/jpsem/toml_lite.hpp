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

#ifndef JPSEM_TOML_LITE_HPP
#define JPSEM_TOML_LITE_HPP

// Reader for the TOML subset used by configuration and experiment files:
//   - [table] headers (one level, no dotted or array-of-tables headers)
//   - bare keys, '#' comments
//   - values: basic strings, integers, floats, booleans, arrays (nested, may span lines)

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace jpsem::toml
{

struct Value
{
    using Array = std::vector<Value>;
    std::variant<bool, std::int64_t, double, std::string, Array> data;

    bool is_number() const;
    double as_double() const;        // accepts integers and floats
    std::int64_t as_integer() const; // integers only
    bool as_bool() const;
    const std::string &as_string() const;
    const Array &as_array() const;
};

// table name ("" for top-level keys) -> key -> value
using Document = std::map<std::string, std::map<std::string, Value>>;

Document parse(const std::string &text);
Document parse_file(const std::string &path);

} // namespace jpsem::toml

#endif
