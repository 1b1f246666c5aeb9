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

#ifndef JPSEM_BEAMFORMING_HPP
#define JPSEM_BEAMFORMING_HPP

#include "jpsem/config.hpp"
#include "jpsem/scenario.hpp"
#include "jpsem/semantics.hpp"
#include "jpsem/tensor.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jpsem
{

// Beamformers share the channel layout: w(n, k, m) in sqrt(mW)
using Beamformers = LinkTensor;

// Per-user SINR targets, kept in both scales
struct SinrTargets
{
    std::vector<double> linear;
    std::vector<double> db;

    static SinrTargets from_linear(std::vector<double> values);
    static SinrTargets from_db(std::vector<double> values);
    int size() const { return static_cast<int>(linear.size()); }
};

struct MarginRecord
{
    double margin = 0.0;    // t* of the w-step
    double objective = 0.0; // R' after the eta-step
};

struct BeamformingOutcome
{
    Beamformers w;
    SinrTargets eta;
    double sse_value = 0.0;
    bool feasible = false;
    int iterations = 0; // J, number of w-steps taken
    std::vector<MarginRecord> margin_trace;
};

struct MarginResult
{
    Beamformers w;
    double margin = 0.0; // certified: sinr_k(w) >= margin * eta_k for all k
    double upper = 0.0;  // proven upper bound on the optimal margin
    int conic_solves = 0;
};

double sinr(const Beamformers &w, const LinkTensor &h, int k, double noise_mw);
std::vector<double> sinr_all(const Beamformers &w, const LinkTensor &h, double noise_mw);

// Per-BS transmit power sum_k ||w_{n,k}||^2 in mW
std::vector<double> bs_power(const Beamformers &w);

// eta_req,k = max(gamma_th, smallest SINR meeting xi_th under table[tau_k]);
// std::nullopt when some user can never reach xi_th
std::optional<SinrTargets> effective_targets(const MappingDesign &mapping, const LogisticTable &table,
                                             double gamma_th_db, double xi_th, SinrScale scale);

// Largest t with sinr_k(w) >= t * eta_k and per-BS power limits. A warm start
// supplies an initial certified point. The search stops early once the upper
// bound drops below stop_below.
MarginResult maxmin_margin_step(const LinkTensor &h, std::span<const double> eta_linear, const SystemConfig &cfg,
                                const Beamformers *warm = nullptr, double stop_below = 0.0);

// Closed-form eta maximizer for fixed w: eta_k = sinr_k(w)
SinrTargets eta_step(const Beamformers &w, const LinkTensor &h, double noise_mw);

// R'(eta) for a mapping: sum_k I_k / (tau_k L_k) * xi_{tau_k}(eta_k)
double surrogate_objective(const MappingDesign &mapping, const SinrTargets &eta, const LogisticTable &table,
                           const SystemConfig &cfg);

// Alternates maxmin_margin_step and eta_step for one mapping
BeamformingOutcome solve_beamforming(const MappingDesign &mapping, const ChannelState &channel,
                                     const LogisticTable &table, const SystemConfig &cfg);

// Optimal max-min margin for the mapping's required targets: at least 1 exactly
// when the mapping is feasible. 0 when a similarity floor is unreachable.
double feasibility_margin(const MappingDesign &mapping, const ChannelState &channel, const LogisticTable &table,
                          const SystemConfig &cfg);

// Diagnostic dump: iteration,margin,objective
void write_margin_trace_csv(const std::string &path, const BeamformingOutcome &outcome);

} // namespace jpsem

#endif
