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

#include "jpsem/units.hpp"

#include <cmath>
#include <limits>

namespace jpsem
{

double dbm_to_linear(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double ratio)
{
    if (ratio <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ratio);
}

} // namespace jpsem
