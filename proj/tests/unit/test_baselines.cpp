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

#include <doctest.h>

#include <cmath>

using namespace jpsem;

namespace
{

SystemConfig gamma5_config()
{
    SystemConfig cfg;
    cfg.max_symbols_per_word = 5;
    cfg.similarity_threshold = 0.6;
    return cfg;
}

} // namespace

TEST_CASE("OMS equals an independent double-loop enumeration (K=2, Gamma=3)")
{
    SystemConfig cfg;
    cfg.num_users = 2;
    cfg.max_symbols_per_word = 3;
    cfg.similarity_threshold = 0.5;
    const LogisticTable table = default_table(3);
    const Geometry g = build_scenario(cfg);
    const auto oms = run_oms(g, cfg, table, 1, 20);
    int feasible = 0;
    for (int t = 1; t <= 20; ++t)
    {
        const ChannelState ch = sample_channel(g, cfg, t);
        double best = 0.0;
        bool any = false;
        std::vector<int> arg{1, 1};
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b)
            {
                const auto o = solve_beamforming(MappingDesign{{a, b}}, ch, table, cfg);
                if (o.feasible && (!any || o.sse_value > best))
                {
                    best = o.sse_value;
                    arg = {a, b};
                    any = true;
                }
            }
        const auto &s = oms[t - 1];
        CHECK(s.slot == t);
        CHECK(s.feasible == any);
        CHECK(s.sse == best);
        CHECK(s.mapping.tau == arg);
        feasible += any;
    }
    CHECK(feasible > 0);
}

TEST_CASE("pruned OMS agrees with the plain lattice scan")
{
    SystemConfig cfg = gamma5_config();
    const LogisticTable table = default_table(5);
    const Geometry g = build_scenario(cfg);
    for (int t = 1; t <= 15; ++t)
    {
        const ChannelState ch = sample_channel(g, cfg, t);
        const auto fast = oms_slot(ch, table, cfg);
        const auto full = oms_slot_exhaustive(ch, table, cfg);
        CHECK(fast.feasible == full.feasible);
        CHECK(fast.sse == doctest::Approx(full.sse).epsilon(1e-9));
    }
}

TEST_CASE("one-symbol lattice: OMS and RMS reduce to MMS")
{
    SystemConfig cfg;
    cfg.max_symbols_per_word = 1;
    cfg.similarity_threshold = 0.2;
    const LogisticTable table = default_table(1);
    const Geometry g = build_scenario(cfg);
    const auto m = run_mms(g, cfg, table, 1, 10);
    const auto o = run_oms(g, cfg, table, 1, 10);
    const auto r = run_rms(g, cfg, table, 1, 10);
    for (int i = 0; i < 10; ++i)
    {
        CHECK(o[i].sse == m[i].sse);
        CHECK(r[i].sse == m[i].sse);
        CHECK(o[i].mapping == m[i].mapping);
    }
}

TEST_CASE("dominance on identical channels")
{
    SystemConfig cfg = gamma5_config();
    const LogisticTable table = default_table(5);
    const Geometry g = build_scenario(cfg);
    const auto o = run_oms(g, cfg, table, 1, 20);
    const auto m = run_mms(g, cfg, table, 1, 20);
    const auto r = run_rms(g, cfg, table, 1, 20);
    const auto d = dsmra_run(g, cfg, table, 1, 20);
    for (int i = 0; i < 20; ++i)
    {
        const double tol = 1e-9 * (1.0 + o[i].sse);
        CHECK(o[i].sse >= m[i].sse - tol);
        CHECK(o[i].sse >= r[i].sse - tol);
        CHECK(o[i].sse >= d[i].sse - tol);
        for (double c : d[i].candidate_sse)
            CHECK(d[i].sse >= c);
    }
}

TEST_CASE("MMS mapping and saturation bound")
{
    SystemConfig cfg;
    const LogisticTable table = default_table(11);
    const Geometry g = build_scenario(cfg);
    const double cap = cfg.num_users * 40.0 * (table[11].a + table[11].b) / (11.0 * 4.0);
    for (const auto &s : run_mms(g, cfg, table, 1, 20))
    {
        CHECK(s.mapping.tau == std::vector<int>{11, 11, 11});
        CHECK(s.sse <= cap + 1e-12);
        if (!s.feasible)
            CHECK(s.sse == 0.0);
    }
}

TEST_CASE("MMS single user matches the closed form")
{
    SystemConfig cfg;
    cfg.num_users = 1;
    const LogisticTable table = default_table(11);
    const Geometry g = build_scenario(cfg);
    const auto trace = run_mms(g, cfg, table, 1, 30);
    int checked = 0;
    for (const auto &s : trace)
    {
        if (!s.feasible)
            continue;
        const ChannelState ch = sample_channel(g, cfg, s.slot);
        double amp = 0.0;
        for (int n = 0; n < cfg.num_bs; ++n)
        {
            double gain = 0.0;
            for (auto v : ch.h.link(n, 0))
                gain += std::norm(v);
            amp += std::sqrt(cfg.bs_power_mw(n) * gain);
        }
        const double x = 10.0 * std::log10(amp * amp / cfg.noise_mw());
        const double expect = sse_user(40.0, 4.0, 11, similarity(table[11], x));
        CHECK(std::abs(s.sse - expect) <= 1e-4 * expect);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("RMS mapping draws are seeded and uniform")
{
    SystemConfig cfg = gamma5_config();
    for (int t = 1; t <= 5; ++t)
        CHECK(random_mapping(cfg, t) == random_mapping(cfg, t));

    const int slots = 10000, G = 5;
    for (int k = 0; k < cfg.num_users; ++k)
    {
        std::vector<int> counts(G, 0);
        for (int t = 1; t <= slots; ++t)
            ++counts[random_mapping(cfg, t).tau[k] - 1];
        double chi2 = 0.0;
        const double expect = static_cast<double>(slots) / G;
        for (int c : counts)
            chi2 += (c - expect) * (c - expect) / expect;
        CHECK(chi2 < 13.277); // chi-square, 4 degrees of freedom, 1% level
    }
}

TEST_CASE("OMS refuses oversized lattices")
{
    SystemConfig cfg;
    cfg.num_users = 6; // 11^6 > 1e5
    const Geometry g = build_scenario(cfg);
    CHECK_THROWS_AS(run_oms(g, cfg, default_table(11), 1, 1), ConfigError);
    try
    {
        check_oms_cap(cfg);
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()).find("1771561") != std::string::npos);
    }
}
