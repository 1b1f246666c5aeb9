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

#ifndef JPSEM_EXPERIMENT_HPP
#define JPSEM_EXPERIMENT_HPP

#include "jpsem/config.hpp"
#include "jpsem/learning.hpp"
#include "jpsem/semantics.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jpsem
{

enum class Scheme
{
    Dsmra,
    Oms,
    Rms,
    Mms
};

std::string to_string(Scheme s);     // "DSMRA", "OMS", ...
Scheme parse_scheme(const std::string &name); // case-insensitive

struct ExperimentSpec
{
    SystemConfig base;
    std::string variable = "similarity_threshold"; // or num_antennas, num_bs
    std::vector<double> values;
    std::vector<Scheme> schemes;
    std::vector<std::uint64_t> seeds;
    int slots = 200; // measured slots per point; DSMRA trains on as many beforehand
};

struct ResultRow
{
    std::string scheme;
    std::string sweep_var;
    double sweep_value = 0.0;
    std::uint64_t seed = 0;
    double mean_sse = 0.0;
    double std_sse = 0.0; // population standard deviation over slots
    double mean_solve_ms = 0.0;
    double feasibility_rate = 0.0;

    bool operator==(const ResultRow &) const = default;
};

// Checks the invariants (non-empty lists, OMS cap, known variable)
void validate(const ExperimentSpec &spec);

// Config sections plus an [experiment] table with keys variable, values,
// schemes, seeds and slots
ExperimentSpec load_experiment(const std::string &path);

// Canonical name for a sweep variable alias (xi_th, M, N, ...)
std::string canonical_variable(const std::string &name);

// Measured window of one scheme, slots W+1..W+S. DSMRA trains on slots 1..W
// first; the baselines start at W+1, so every scheme sees the same channels.
std::vector<SlotTrace> run_scheme(Scheme scheme, const SystemConfig &cfg, const LogisticTable &table, int warmup,
                                  int measured, std::vector<SlotTrace> *full_trace = nullptr);

ResultRow summarize(const std::vector<SlotTrace> &window, Scheme scheme, const std::string &var, double value,
                    std::uint64_t seed);

// One row per (scheme, value, seed), sorted by scheme, value, seed. The
// optional callback sees each row as it completes.
std::vector<ResultRow> run_sweep(const ExperimentSpec &spec,
                                 const std::function<void(const ResultRow &)> &progress = {});

} // namespace jpsem

#endif
