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

#ifndef JPSEM_BASELINES_HPP
#define JPSEM_BASELINES_HPP

#include "jpsem/learning.hpp"

#include <vector>

namespace jpsem
{

// Best mapping of one slot over the whole lattice. Candidates that provably
// cannot beat the incumbent are skipped:
//   - a target above the user's single-user SINR bound is unreachable,
//   - targets dominating those of a mapping already found infeasible are too,
//   - an SSE upper bound below the incumbent rules a mapping out.
// Ties resolve to the lexicographically smallest mapping.
SlotTrace oms_slot(const ChannelState &channel, const LogisticTable &table, const SystemConfig &cfg);

// Lattice enumeration without pruning, for cross-checks
SlotTrace oms_slot_exhaustive(const ChannelState &channel, const LogisticTable &table, const SystemConfig &cfg);

// Slots first..last inclusive. OMS refuses lattices larger than cfg.oms_cap.
std::vector<SlotTrace> run_oms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot);
std::vector<SlotTrace> run_rms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot);
std::vector<SlotTrace> run_mms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot);

// Throws ConfigError with a sizing message when Gamma^K exceeds cfg.oms_cap
void check_oms_cap(const SystemConfig &cfg);

// Uniform mapping drawn from the slot's own stream
MappingDesign random_mapping(const SystemConfig &cfg, int slot);

} // namespace jpsem

#endif
