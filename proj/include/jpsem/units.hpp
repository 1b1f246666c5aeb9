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

#ifndef JPSEM_UNITS_HPP
#define JPSEM_UNITS_HPP

namespace jpsem
{

// All internal power quantities are linear milliwatts; dB/dBm only at the boundaries.
double dbm_to_linear(double dbm); // dBm -> mW
double db_to_linear(double db);   // dB -> ratio
double linear_to_db(double ratio); // ratio -> dB, -inf for 0

} // namespace jpsem

#endif
