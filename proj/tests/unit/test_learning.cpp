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
#include "jpsem/learning.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace jpsem;

namespace
{

// Sort every lattice point by (distance, lexicographic), treating distances
// within 1e-9 as equal
std::vector<MappingDesign> brute_knn(const std::vector<double> &tau_hat, int count, int G)
{
    const int K = static_cast<int>(tau_hat.size());
    std::vector<std::pair<double, std::vector<int>>> all;
    std::vector<int> cur(K, 1);
    while (true)
    {
        double d = 0.0;
        for (int k = 0; k < K; ++k)
            d += (cur[k] - tau_hat[k]) * (cur[k] - tau_hat[k]);
        all.emplace_back(std::sqrt(d), cur);
        int k = K - 1;
        while (k >= 0 && cur[k] == G)
            cur[k--] = 1;
        if (k < 0)
            break;
        ++cur[k];
    }
    std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
        if (std::abs(a.first - b.first) > 1e-9)
            return a.first < b.first;
        return a.second < b.second;
    });
    std::vector<MappingDesign> out;
    for (int i = 0; i < count; ++i)
        out.push_back({all[i].second});
    return out;
}

} // namespace

TEST_CASE("features")
{
    SystemConfig cfg;
    LinkTensor h(3, 3, 3);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal(0.0, 1e-5);
    for (auto &v : h.flat())
        v = cplx(normal(rng), normal(rng));

    const auto x = features(h, cfg);
    for (int k = 0; k < 3; ++k)
    {
        double g = 0.0;
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m < 3; ++m)
                g += h(n, k, m).real() * h(n, k, m).real() + h(n, k, m).imag() * h(n, k, m).imag();
        CHECK(std::abs(x[k] - (10.0 * std::log10(g) + 100.0) / 10.0) < 1e-12);
    }

    LinkTensor twin = h;
    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m)
            twin(n, 1, m) = twin(n, 0, m);
    auto y = features(twin, cfg);
    CHECK(y[0] == y[1]);

    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m)
            twin(n, 2, m) *= 10.0;
    y = features(twin, cfg);
    CHECK(y[2] - x[2] == doctest::Approx(20.0 / cfg.learning.feature_scale_db).epsilon(1e-12));

    for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 3; ++m)
            twin(n, 0, m) = 0.0;
    y = features(twin, cfg);
    CHECK(y[0] == doctest::Approx((kZeroGainDb + 100.0) / 10.0));
}

TEST_CASE("quantize_knn")
{
    const auto q = quantize_knn(std::vector<double>{1.4, 2.6}, 3, 3);
    REQUIRE(q.size() == 3);
    CHECK(q[0].tau == std::vector<int>{1, 3});
    CHECK(q[1].tau == std::vector<int>{1, 2});
    CHECK(q[2].tau == std::vector<int>{2, 3});

    const auto one = quantize_knn(std::vector<double>{2.0, 5.0, 1.0}, 1, 5);
    CHECK(one.front().tau == std::vector<int>{2, 5, 1});

    const auto all = quantize_knn(std::vector<double>{2.2, 3.7}, 16, 4);
    std::set<std::vector<int>> seen;
    for (const auto &m : all)
        seen.insert(m.tau);
    CHECK(seen.size() == 16);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(1.0, 5.0);
    std::uniform_int_distribution<int> half(2, 10);
    for (int i = 0; i < 300; ++i)
    {
        std::vector<double> t{u(rng), u(rng), u(rng)};
        if (i % 3 == 0) // exact half-integers force ties
            t = {half(rng) / 2.0, half(rng) / 2.0, half(rng) / 2.0};
        const int E = 1 + i % 10;
        const auto got = quantize_knn(t, E, 5);
        const auto want = brute_knn(t, E, 5);
        REQUIRE(got.size() == want.size());
        for (int e = 0; e < E; ++e)
            CHECK(got[e].tau == want[e].tau);
    }
}

TEST_CASE("select_best")
{
    CHECK(select_best(std::vector<double>{0.7}) == 0);
    CHECK(select_best(std::vector<double>{0.1, 0.5, 0.5}) == 1);
    CHECK(select_best(std::vector<double>{0.0, 0.0}) == 0);
    CHECK_THROWS_AS(select_best(std::vector<double>{}), std::invalid_argument);

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> v(0, 5);
    for (int i = 0; i < 200; ++i)
    {
        std::vector<double> xs(1 + i % 7);
        for (auto &x : xs)
            x = v(rng);
        int scan = 0;
        for (int j = 1; j < static_cast<int>(xs.size()); ++j)
            if (xs[j] > xs[scan])
                scan = j;
        CHECK(select_best(xs) == scan);
    }
}

TEST_CASE("replay memory")
{
    ReplayMemory mem(8);
    for (int i = 0; i < 13; ++i)
        mem.push({static_cast<double>(i)}, MappingDesign{{i}});
    REQUIRE(mem.size() == 8);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(mem.at(i).x[0] == static_cast<double>(5 + i));
    CHECK_THROWS(mem.at(8));

    std::mt19937_64 rng(3);
    const auto batch = mem.sample(5, rng);
    CHECK(batch.size() == 5);
    std::set<const ReplayMemory::Entry *> distinct(batch.begin(), batch.end());
    CHECK(distinct.size() == 5);
    CHECK(mem.sample(100, rng).size() == 8);
}

TEST_CASE("train_step lowers the loss on a fixed batch")
{
    SystemConfig cfg;
    PolicyNetwork net = PolicyNetwork::random({3, 16, 8, 3}, 3);
    Adam opt(net.parameters().size(), 1e-2);
    ReplayMemory mem(4);
    mem.push({0.1, 0.2, 0.3}, MappingDesign{{1, 11, 6}});
    mem.push({-0.1, 0.5, 1.3}, MappingDesign{{11, 11, 1}});
    std::mt19937_64 rng(1);
    const auto batch = mem.sample(2, rng);
    const double first = train_step(net, opt, batch, 11);
    double last = first;
    for (int i = 0; i < 200; ++i)
        last = train_step(net, opt, batch, 11);
    CHECK(last < 0.5 * first);
}

TEST_CASE("learning signal: the policy locks onto a dominant mapping")
{
    const std::vector<int> target{4, 2, 5};
    const CandidateEvaluator eval = [&](const MappingDesign &m) {
        double d = 0.0;
        for (int k = 0; k < 3; ++k)
            d += (m.tau[k] - target[k]) * (m.tau[k] - target[k]);
        return CandidateValue{100.0 - d, true};
    };
    const std::vector<double> x{0.4, -0.3, 1.1};
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        SystemConfig cfg;
        cfg.seed = seed;
        cfg.max_symbols_per_word = 5;
        cfg.learning.candidates = 3;
        DsmraAgent agent(cfg);
        int locked_from = -1;
        for (int t = 1; t <= 2000; ++t)
        {
            agent.step(t, x, eval);
            const auto top = quantize_knn(policy_action(agent.network(), x, 5), 1, 5).front();
            if (top.tau != target)
                locked_from = -1;
            else if (locked_from < 0)
                locked_from = t;
        }
        CHECK(locked_from > 0);
        MESSAGE("seed " << seed << ": top-1 action equals the dominant mapping from slot " << locked_from);
    }
}

TEST_CASE("all-infeasible slots: ranker breaks the zero-SSE tie")
{
    SystemConfig cfg;
    cfg.num_users = 2;
    cfg.max_symbols_per_word = 5;
    cfg.learning.candidates = 3;
    const std::vector<double> x{0.2, 0.7};
    const CandidateEvaluator none = [](const MappingDesign &) { return CandidateValue{0.0, false}; };
    const auto cands = quantize_knn(policy_action(DsmraAgent(cfg).network(), x, 5), 3, 5);

    DsmraAgent plain(cfg);
    CHECK(plain.step(1, x, none).mapping == cands[0]);
    CHECK(plain.memory().at(0).tau == cands[0]);

    // score each candidate by its position, so the last one is closest to feasible
    DsmraAgent ranked(cfg);
    const auto tr = ranked.step(1, x, none, [&](const MappingDesign &m) {
        return static_cast<double>(std::find(cands.begin(), cands.end(), m) - cands.begin());
    });
    CHECK(tr.mapping == cands[2]);
    CHECK(!tr.feasible);
    CHECK(tr.sse == 0.0);
    CHECK(ranked.memory().at(0).tau == cands[2]);

    // any feasible candidate keeps the plain argmax
    const CandidateEvaluator second = [&](const MappingDesign &m) {
        return m == cands[1] ? CandidateValue{1.5, true} : CandidateValue{0.0, false};
    };
    DsmraAgent mixed(cfg);
    CHECK(mixed.step(1, x, second, [](const MappingDesign &) { return 0.0; }).mapping == cands[1]);

    // equal scores keep candidate order
    DsmraAgent flat(cfg);
    CHECK(flat.step(1, x, none, [](const MappingDesign &) { return 0.3; }).mapping == cands[0]);
}

TEST_CASE("dsmra run")
{
    SystemConfig cfg;
    cfg.max_symbols_per_word = 5;
    cfg.similarity_threshold = 0.6;
    const LogisticTable table = default_table(5);
    const Geometry g = build_scenario(cfg);

    SUBCASE("deterministic, argmax per slot, periodic training")
    {
        const auto a = dsmra_run(g, cfg, table, 1, 25);
        const auto b = dsmra_run(g, cfg, table, 1, 25);
        REQUIRE(a.size() == 25);
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            CHECK(a[i].mapping == b[i].mapping);
            CHECK(a[i].sse == b[i].sse);
            CHECK(a[i].loss == b[i].loss);
            CHECK(a[i].candidate_sse.size() == 3);
            CHECK(a[i].sse == *std::max_element(a[i].candidate_sse.begin(), a[i].candidate_sse.end()));
            CHECK(a[i].loss.has_value() == (a[i].slot % cfg.learning.update_interval == 0));
            CHECK(a[i].solve_ms == 0.0);
        }
    }

    SUBCASE("a one-symbol lattice reduces to MMS")
    {
        SystemConfig one = cfg;
        one.max_symbols_per_word = 1;
        one.similarity_threshold = 0.2;
        const LogisticTable t1 = default_table(1);
        const auto d = dsmra_run(g, one, t1, 1, 15);
        const auto m = run_mms(g, one, t1, 1, 15);
        for (std::size_t i = 0; i < d.size(); ++i)
        {
            CHECK(d[i].mapping == m[i].mapping);
            CHECK(d[i].sse == m[i].sse);
            CHECK(d[i].feasible == m[i].feasible);
        }
    }
}
