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

#include "jpsem/learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace jpsem
{

std::vector<double> features(const LinkTensor &h, const SystemConfig &cfg)
{
    std::vector<double> x(static_cast<std::size_t>(h.num_users()));
    for (int k = 0; k < h.num_users(); ++k)
    {
        double g = 0.0;
        for (int n = 0; n < h.num_bs(); ++n)
            for (const auto &v : h.link(n, k))
                g += std::norm(v);
        const double db = g > 0.0 ? 10.0 * std::log10(g) : kZeroGainDb;
        x[k] = (db - cfg.learning.feature_offset_db) / cfg.learning.feature_scale_db;
    }
    return x;
}

std::vector<double> policy_action(const PolicyNetwork &net, std::span<const double> x, int max_symbols)
{
    const Eigen::VectorXd in = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd out = net.forward(in);
    std::vector<double> tau(static_cast<std::size_t>(out.size()));
    for (Eigen::Index k = 0; k < out.size(); ++k)
        tau[k] = 1.0 + (max_symbols - 1) * out[k];
    return tau;
}

std::vector<MappingDesign> quantize_knn(std::span<const double> tau_hat, int count, int max_symbols)
{
    const int K = static_cast<int>(tau_hat.size());
    if (K < 1 || max_symbols < 1)
        throw std::invalid_argument("quantize_knn: empty action or lattice");
    const double lattice = std::pow(static_cast<double>(max_symbols), K);
    if (lattice > 1e6)
        throw std::invalid_argument("quantize_knn: lattice too large for exhaustive search");
    if (count < 1 || count > lattice)
        throw std::invalid_argument("quantize_knn: E must lie in [1, Gamma^K]");

    struct Point
    {
        double d2;
        std::vector<int> tau;
    };
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(lattice));
    std::vector<int> cur(static_cast<std::size_t>(K), 1);
    while (true)
    {
        double d2 = 0.0;
        for (int k = 0; k < K; ++k)
            d2 += (cur[k] - tau_hat[k]) * (cur[k] - tau_hat[k]);
        pts.push_back({d2, cur});
        int k = K - 1;
        while (k >= 0 && cur[k] == max_symbols)
            cur[k--] = 1;
        if (k < 0)
            break;
        ++cur[k];
    }
    // Points are generated in lexicographic order, so a stable sort on distance
    // keeps exact ties lexicographic. Near ties from rounding are regrouped below.
    std::stable_sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) { return a.d2 < b.d2; });
    for (std::size_t i = 0; i < pts.size();)
    {
        std::size_t j = i + 1;
        while (j < pts.size() && pts[j].d2 - pts[j - 1].d2 <= 1e-9)
            ++j;
        if (j - i > 1)
            std::sort(pts.begin() + i, pts.begin() + j, [](const Point &a, const Point &b) { return a.tau < b.tau; });
        if (j >= static_cast<std::size_t>(count))
            break;
        i = j;
    }

    std::vector<MappingDesign> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int e = 0; e < count; ++e)
        out.push_back({std::move(pts[e].tau)});
    return out;
}

int select_best(std::span<const double> sse)
{
    if (sse.empty())
        throw std::invalid_argument("select_best: no candidates");
    int best = 0;
    for (int e = 1; e < static_cast<int>(sse.size()); ++e)
        if (sse[e] > sse[best])
            best = e;
    return best;
}

int select_best(std::span<const BeamformingOutcome> outcomes)
{
    std::vector<double> v;
    v.reserve(outcomes.size());
    for (const auto &o : outcomes)
        v.push_back(o.sse_value);
    return select_best(v);
}

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw std::invalid_argument("replay memory capacity must be positive");
    entries_.reserve(capacity);
}

void ReplayMemory::push(std::vector<double> x, MappingDesign tau)
{
    if (entries_.size() < capacity_)
    {
        entries_.push_back({std::move(x), std::move(tau)});
        return;
    }
    entries_[head_] = {std::move(x), std::move(tau)};
    head_ = (head_ + 1) % capacity_;
}

const ReplayMemory::Entry &ReplayMemory::at(std::size_t i) const
{
    if (i >= entries_.size())
        throw std::out_of_range("replay memory index");
    return entries_[(head_ + i) % entries_.size()];
}

std::vector<const ReplayMemory::Entry *> ReplayMemory::sample(std::size_t batch, std::mt19937_64 &rng) const
{
    const std::size_t n = std::min(batch, entries_.size());
    std::vector<std::size_t> idx(entries_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<const Entry *> out;
    out.reserve(n);
    // partial Fisher-Yates over storage order
    for (std::size_t i = 0; i < n; ++i)
    {
        std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
        out.push_back(&entries_[idx[i]]);
    }
    return out;
}

double train_step(PolicyNetwork &net, Adam &opt, std::span<const ReplayMemory::Entry *const> batch, int max_symbols)
{
    if (batch.empty())
        throw std::invalid_argument("train_step: empty batch");
    const Eigen::Index B = static_cast<Eigen::Index>(batch.size());
    Eigen::MatrixXd X(net.input_size(), B), Y(net.output_size(), B);
    for (Eigen::Index j = 0; j < B; ++j)
    {
        const auto &e = *batch[j];
        for (int k = 0; k < net.input_size(); ++k)
            X(k, j) = e.x.at(k);
        for (int k = 0; k < net.output_size(); ++k)
            Y(k, j) = max_symbols > 1 ? (e.tau.tau.at(k) - 1.0) / (max_symbols - 1.0) : 0.0;
    }
    Eigen::VectorXd grad;
    const double value = net.loss(X, Y, &grad);
    opt.step(net.parameters(), grad);
    return value;
}

namespace
{

std::vector<int> layer_widths(const SystemConfig &cfg)
{
    std::vector<int> w{cfg.num_users};
    w.insert(w.end(), cfg.learning.hidden_layers.begin(), cfg.learning.hidden_layers.end());
    w.push_back(cfg.num_users);
    return w;
}

} // namespace

DsmraAgent::DsmraAgent(const SystemConfig &cfg)
    : max_symbols_(cfg.max_symbols_per_word), candidates_(cfg.num_candidates()), batch_size_(cfg.learning.batch_size),
      update_interval_(cfg.learning.update_interval),
      net_(PolicyNetwork::random(layer_widths(cfg),
                                 derive_seed(cfg.seed, {static_cast<std::uint64_t>(Stream::PolicyInit)}))),
      adam_(net_.parameters().size(), cfg.learning.learning_rate),
      memory_(static_cast<std::size_t>(cfg.learning.memory_capacity)),
      replay_rng_(make_rng(cfg.seed, {static_cast<std::uint64_t>(Stream::ReplaySampling)}))
{
}

SlotTrace DsmraAgent::step(int slot, const std::vector<double> &x, const CandidateEvaluator &evaluate,
                           const InfeasibleRanker &rank)
{
    const auto tau_hat = policy_action(net_, x, max_symbols_);
    auto candidates = quantize_knn(tau_hat, candidates_, max_symbols_);

    SlotTrace tr;
    tr.slot = slot;
    std::vector<bool> feasible;
    for (const auto &c : candidates)
    {
        const CandidateValue v = evaluate(c);
        tr.candidate_sse.push_back(v.sse);
        feasible.push_back(v.feasible);
    }
    int best = select_best(tr.candidate_sse);
    if (rank && std::none_of(feasible.begin(), feasible.end(), [](bool f) { return f; }))
    {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < candidates.size(); ++e)
        {
            const double r = rank(candidates[e]);
            if (r > top)
            {
                top = r;
                best = static_cast<int>(e);
            }
        }
    }
    tr.mapping = candidates[best];
    tr.sse = tr.candidate_sse[best];
    tr.feasible = feasible[best];

    memory_.push(x, candidates[best]);
    if (slot % update_interval_ == 0)
    {
        const auto batch = memory_.sample(static_cast<std::size_t>(batch_size_), replay_rng_);
        tr.loss = train_step(net_, adam_, batch, max_symbols_);
    }
    return tr;
}

std::vector<SlotTrace> dsmra_run(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                                 int first_slot, int last_slot, DsmraAgent *agent)
{
    std::optional<DsmraAgent> own;
    if (!agent)
        agent = &own.emplace(cfg);

    std::vector<SlotTrace> trace;
    trace.reserve(static_cast<std::size_t>(std::max(0, last_slot - first_slot + 1)));
    for (int t = first_slot; t <= last_slot; ++t)
    {
        const auto start = std::chrono::steady_clock::now();
        const ChannelState ch = sample_channel(geometry, cfg, t);
        SlotTrace tr = agent->step(t, features(ch.h, cfg), [&](const MappingDesign &m) {
            const BeamformingOutcome o = solve_beamforming(m, ch, table, cfg);
            return CandidateValue{o.sse_value, o.feasible};
        }, [&](const MappingDesign &m) { return feasibility_margin(m, ch, table, cfg); });
        if (cfg.record_timing)
            tr.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        trace.push_back(std::move(tr));
    }
    return trace;
}

} // namespace jpsem
