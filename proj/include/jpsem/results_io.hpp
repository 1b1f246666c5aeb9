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

#ifndef JPSEM_RESULTS_IO_HPP
#define JPSEM_RESULTS_IO_HPP

#include "jpsem/experiment.hpp"
#include "jpsem/learning.hpp"

#include <span>
#include <string>
#include <vector>

namespace jpsem
{

inline constexpr const char *kResultsHeader =
    "scheme,sweep_var,sweep_value,seed,mean_sse,std_sse,mean_solve_ms,feasibility_rate";

void write_results_csv(const std::string &path, const std::vector<ResultRow> &rows);
std::vector<ResultRow> read_results_csv(const std::string &path);

// Per-scheme series averaged over seeds:
// scheme,sweep_var,sweep_value,mean_sse,seed_std,num_seeds
void write_plot_data(const std::string &path, const std::vector<ResultRow> &rows);

// slot,tau_1..tau_K,sse,loss,feasible (loss is "nan" in slots without an update)
void write_trace_csv(const std::string &path, const std::vector<SlotTrace> &trace);

// Trailing means over full windows; length = size - window + 1 (empty if shorter)
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

// Per-slot loss series: each slot carries the most recent update's loss, and
// slots before the first update take the first loss. Empty without updates.
std::vector<double> carried_loss(const std::vector<SlotTrace> &trace);

// slot,loss_ma,sse_ma where slot is the last slot of each window
void write_convergence_csv(const std::string &path, const std::vector<SlotTrace> &trace, std::size_t window = 100);

// Writes results.csv and plot_data.csv into a directory, creating it if needed
void emit_results(const std::string &dir, const std::vector<ResultRow> &rows);

} // namespace jpsem

#endif
