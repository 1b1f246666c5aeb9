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

#include "jpsem/baselines.hpp"
#include "jpsem/errors.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <cmath>
#include <numeric>
#include <sstream>

namespace jpsem
{

namespace
{

std::vector<MappingDesign> lattice(int K, int max_symbols)
{
    std::vector<MappingDesign> out;
    std::vector<int> cur(static_cast<std::size_t>(K), 1);
    while (true)
    {
        out.push_back({cur});
        int k = K - 1;
        while (k >= 0 && cur[k] == max_symbols)
            cur[k--] = 1;
        if (k < 0)
            return out;
        ++cur[k];
    }
}

} // namespace

void check_oms_cap(const SystemConfig &cfg)
{
    if (cfg.lattice_size() > cfg.oms_cap)
    {
        std::ostringstream msg;
        msg << std::fixed << std::setprecision(0) << "OMS would enumerate Gamma^K = " << cfg.max_symbols_per_word << "^" << cfg.num_users << " = "
            << cfg.lattice_size() << " mappings per slot, above oms_cap = " << cfg.oms_cap
            << "; lower Gamma or K, or raise [harness] oms_cap";
        throw ConfigError(msg.str());
    }
}

namespace
{

// Largest SINR user k can see: every BS beams its full power at k alone
std::vector<double> single_user_bound(const LinkTensor &h, const SystemConfig &cfg)
{
    std::vector<double> out(static_cast<std::size_t>(h.num_users()));
    for (int k = 0; k < h.num_users(); ++k)
    {
        double amp = 0.0;
        for (int n = 0; n < h.num_bs(); ++n)
        {
            double g = 0.0;
            for (const auto &v : h.link(n, k))
                g += std::norm(v);
            amp += std::sqrt(cfg.bs_power_mw(n) * g);
        }
        out[k] = amp * amp / cfg.noise_mw();
    }
    return out;
}

SlotTrace infeasible_slot(int slot, int K)
{
    SlotTrace tr;
    tr.slot = slot;
    tr.mapping.tau.assign(static_cast<std::size_t>(K), 1);
    return tr;
}

template <class F>
std::vector<SlotTrace> per_slot(const Geometry &geometry, const SystemConfig &cfg, int first, int last, F &&body)
{
    std::vector<SlotTrace> out;
    out.reserve(static_cast<std::size_t>(std::max(0, last - first + 1)));
    for (int t = first; t <= last; ++t)
    {
        const auto start = std::chrono::steady_clock::now();
        const ChannelState ch = sample_channel(geometry, cfg, t);
        SlotTrace tr = body(ch);
        tr.slot = t;
        if (cfg.record_timing)
            tr.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(tr));
    }
    return out;
}

SlotTrace fixed_mapping_slot(const MappingDesign &m, const ChannelState &ch, const LogisticTable &table,
                             const SystemConfig &cfg)
{
    const BeamformingOutcome o = solve_beamforming(m, ch, table, cfg);
    SlotTrace tr;
    tr.slot = ch.slot;
    tr.mapping = m;
    tr.sse = o.sse_value;
    tr.feasible = o.feasible;
    return tr;
}

} // namespace

SlotTrace oms_slot(const ChannelState &channel, const LogisticTable &table, const SystemConfig &cfg)
{
    const LinkTensor &h = channel.h;
    const int K = h.num_users();
    const auto su = single_user_bound(h, cfg);

    struct Candidate
    {
        MappingDesign m;
        SinrTargets req;
        double bound;
    };
    std::vector<Candidate> cands;
    for (auto &m : lattice(K, cfg.max_symbols_per_word))
    {
        auto req = effective_targets(m, table, cfg.sinr_threshold_db, cfg.similarity_threshold, cfg.sinr_scale);
        if (!req)
            continue;
        bool reachable = true;
        double bound = 0.0;
        for (int k = 0; k < K && reachable; ++k)
        {
            reachable = req->linear[k] <= su[k];
            const double x = to_curve_scale(su[k], cfg.sinr_scale);
            bound += sse_user(cfg.info(k), cfg.words(k), m.tau[k], similarity(table[m.tau[k]], x));
        }
        if (reachable)
            cands.push_back({std::move(m), std::move(*req), bound});
    }
    // stable: equal bounds stay in lexicographic order
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) { return a.bound > b.bound; });

    SlotTrace best = infeasible_slot(channel.slot, K);
    std::vector<const SinrTargets *> failed;
    for (const auto &c : cands)
    {
        if (best.feasible && c.bound < best.sse)
            break;
        const bool dominated = std::any_of(failed.begin(), failed.end(), [&](const SinrTargets *f) {
            for (int k = 0; k < K; ++k)
                if (f->linear[k] > c.req.linear[k])
                    return false;
            return true;
        });
        if (dominated)
            continue;
        const BeamformingOutcome o = solve_beamforming(c.m, channel, table, cfg);
        if (!o.feasible)
        {
            failed.push_back(&c.req);
            continue;
        }
        if (!best.feasible || o.sse_value > best.sse || (o.sse_value == best.sse && c.m < best.mapping))
        {
            best.mapping = c.m;
            best.sse = o.sse_value;
            best.feasible = true;
        }
    }
    return best;
}

SlotTrace oms_slot_exhaustive(const ChannelState &channel, const LogisticTable &table, const SystemConfig &cfg)
{
    SlotTrace best = infeasible_slot(channel.slot, channel.h.num_users());
    for (const auto &m : lattice(channel.h.num_users(), cfg.max_symbols_per_word))
    {
        const BeamformingOutcome o = solve_beamforming(m, channel, table, cfg);
        if (o.feasible && (!best.feasible || o.sse_value > best.sse))
        {
            best.mapping = m;
            best.sse = o.sse_value;
            best.feasible = true;
        }
    }
    return best;
}

std::vector<SlotTrace> run_oms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot)
{
    check_oms_cap(cfg);
    return per_slot(geometry, cfg, first_slot, last_slot,
                    [&](const ChannelState &ch) { return oms_slot(ch, table, cfg); });
}

MappingDesign random_mapping(const SystemConfig &cfg, int slot)
{
    auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(Stream::RandomMapping), static_cast<std::uint64_t>(slot)});
    std::uniform_int_distribution<int> pick(1, cfg.max_symbols_per_word);
    MappingDesign m;
    for (int k = 0; k < cfg.num_users; ++k)
        m.tau.push_back(pick(rng));
    return m;
}

std::vector<SlotTrace> run_rms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot)
{
    return per_slot(geometry, cfg, first_slot, last_slot, [&](const ChannelState &ch) {
        return fixed_mapping_slot(random_mapping(cfg, ch.slot), ch, table, cfg);
    });
}

std::vector<SlotTrace> run_mms(const Geometry &geometry, const SystemConfig &cfg, const LogisticTable &table,
                               int first_slot, int last_slot)
{
    const MappingDesign m{std::vector<int>(static_cast<std::size_t>(cfg.num_users), cfg.max_symbols_per_word)};
    return per_slot(geometry, cfg, first_slot, last_slot,
                    [&](const ChannelState &ch) { return fixed_mapping_slot(m, ch, table, cfg); });
}

} // namespace jpsem
