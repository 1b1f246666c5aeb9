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

#ifndef JPSEM_ERRORS_HPP
#define JPSEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jpsem
{

// Invalid or inconsistent configuration values (also raised by the TOML reader)
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Convex solver failed to certify a result
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing a file failed
class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Returns a short machine-readable tag for an exception, used by the CLI error line
std::string error_kind(const std::exception &e);

} // namespace jpsem

#endif
