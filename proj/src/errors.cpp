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

#include "jpsem/errors.hpp"
#include "jpsem/semantics.hpp"

namespace jpsem
{

std::string error_kind(const std::exception &e)
{
    if (dynamic_cast<const ConfigError *>(&e))
        return "config";
    if (dynamic_cast<const SolverError *>(&e))
        return "solver";
    if (dynamic_cast<const FitError *>(&e))
        return "fit";
    if (dynamic_cast<const IoError *>(&e))
        return "io";
    if (dynamic_cast<const std::domain_error *>(&e))
        return "domain";
    if (dynamic_cast<const std::invalid_argument *>(&e))
        return "usage";
    return "runtime";
}

} // namespace jpsem
