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

#ifndef JPSEM_LEARNING_HPP
#define JPSEM_LEARNING_HPP

#include "jpsem/beamforming.hpp"
#include "jpsem/config.hpp"
#include "jpsem/policy_network.hpp"
#include "jpsem/scenario.hpp"
#include "jpsem/semantics.hpp"

#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace jpsem
{

// Feature assigned to a user whose aggregate channel gain is exactly zero
inline constexpr double kZeroGainDb = -300.0;

// One slot of any scheme
struct SlotTrace
{
    int slot = 0;
    MappingDesign mapping;
    double sse = 0.0;
    bool feasible = false;
    std::optional<double> loss;       // set when a training step ran in this slot
    std::vector<double> candidate_sse; // DSMRA only
    double solve_ms = 0.0;            // zero unless timing is enabled
};

// (10 log10(sum_n ||h_{n,k}||^2) - offset) / scale for every user
std::vector<double> features(const LinkTensor &h, const SystemConfig &cfg);

// tau_hat = 1 + (Gamma - 1) * f(x)
std::vector<double> policy_action(const PolicyNetwork &net, std::span<const double> x, int max_symbols);

// The E lattice points of {1..Gamma}^K closest to tau_hat, ordered by
// (distance, lexicographic). Distances within 1e-9 count as equal.
std::vector<MappingDesign> quantize_knn(std::span<const double> tau_hat, int count, int max_symbols);

// Index of the first maximum. Throws std::invalid_argument when empty.
int select_best(std::span<const double> sse);
int select_best(std::span<const BeamformingOutcome> outcomes);

// Fixed-capacity FIFO of (features, selected mapping)
class ReplayMemory
{
public:
    struct Entry
    {
        std::vector<double> x;
        MappingDesign tau;
    };

    explicit ReplayMemory(std::size_t capacity);

    void push(std::vector<double> x, MappingDesign tau);
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }

    // i-th entry in insertion order, 0 = oldest retained
    const Entry &at(std::size_t i) const;

    // Uniform draw without replacement of min(batch, size) entries
    std::vector<const Entry *> sample(std::size_t batch, std::mt19937_64 &rng) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0; // next slot to overwrite once full
    std::vector<Entry> entries_;
};

// One cross-entropy / Adam update. Labels are (tau - 1) / (Gamma - 1), or 0 when
// Gamma = 1. Returns the loss before the update.
double train_step(PolicyNetwork &net, Adam &opt, std::span<const ReplayMemory::Entry *const> batch, int max_symbols);

struct CandidateValue
{
    double sse = 0.0;
    bool feasible = false;
};
using CandidateEvaluator = std::function<CandidateValue(const MappingDesign &)>;
// Distance-to-feasibility score; larger is closer
using InfeasibleRanker = std::function<double(const MappingDesign &)>;

// Policy network, replay memory and optimizer state for one run
class DsmraAgent
{
public:
    explicit DsmraAgent(const SystemConfig &cfg);

    // Forward, quantize, evaluate every candidate, select, store and train on
    // slots that are multiples of the update interval. When every candidate is
    // infeasible the SSE tie is broken by the ranker if one is given (first
    // best score wins), otherwise by candidate order.
    SlotTrace step(int slot, const std::vector<double> &x, const CandidateEvaluator &evaluate,
                   const InfeasibleRanker &rank = {});

    PolicyNetwork &network() { return net_; }
    const PolicyNetwork &network() const { return net_; }
    const ReplayMemory &memory() const { return memory_; }

private:
    int max_symbols_;
    int candidates_;
    int batch_size_;
    int update_interval_;
    PolicyNetwork net_;
    Adam adam_;
    ReplayMemory memory_;
    std::mt19937_64 replay_rng_;
};

// Runs slots first..last (inclusive) of one scenario. Each candidate is solved
// with solve_beamforming on that slot's channel; all-infeasible slots are
// ranked by feasibility_margin.
std::vector<SlotTrace> dsmra_run(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                                 int first_slot, int last_slot, DsmraAgent *agent = nullptr);

} // namespace jpsem

#endif
