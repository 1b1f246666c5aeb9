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

#ifndef JPSEM_CSV_HPP
#define JPSEM_CSV_HPP

#include <string>
#include <vector>

namespace jpsem::csv
{

using Row = std::vector<std::string>;

// Reads a comma-separated file, checks that the header matches, and returns the data rows.
// Blank lines are skipped. No quoting support.
std::vector<Row> read_file(const std::string &path, const Row &expected_header);

Row split(const std::string &line);
double to_double(const std::string &field);

// Shortest text that reads back to the same double ("nan", "inf" and "-inf" for non-finite)
std::string format(double value);

} // namespace jpsem::csv

#endif
