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

#include "jpsem/beamforming.hpp"
#include "jpsem/scenario.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

using namespace jpsem;

namespace
{

LinkTensor random_tensor(int N, int K, int M, std::mt19937_64 &rng, double scale = 1.0)
{
    std::normal_distribution<double> normal;
    LinkTensor t(N, K, M);
    for (auto &v : t.flat())
        v = scale * cplx(normal(rng), normal(rng));
    return t;
}

// Element-by-element SINR: |sum_n sum_m conj(h) w|^2 over interference plus noise
double oracle_sinr(const LinkTensor &w, const LinkTensor &h, int k, double noise)
{
    double interference = noise, signal = 0.0;
    for (int i = 0; i < h.num_users(); ++i)
    {
        cplx acc = 0.0;
        for (int n = 0; n < h.num_bs(); ++n)
            for (int m = 0; m < h.num_antennas(); ++m)
                acc += std::conj(h(n, k, m)) * w(n, i, m);
        if (i == k)
            signal = std::norm(acc);
        else
            interference += std::norm(acc);
    }
    return signal / interference;
}

// Max-min margin for K = 2, N = 1 under the power budget P, restricted to the
// family w_k ~ (noise I + q1 h1 h1' + q2 h2 h2')^-1 h_k with q1 + q2 = P, which
// contains the optimum. For every direction pair the power split is found by
// bisection (user 1's margin rises with its share, user 2's falls).
double grid_oracle(const LinkTensor &h, const std::vector<double> &eta, double P, double noise, int points)
{
    const int M = h.num_antennas();
    Eigen::VectorXcd h1(M), h2(M);
    for (int m = 0; m < M; ++m)
    {
        h1(m) = h(0, 0, m);
        h2(m) = h(0, 1, m);
    }
    auto margin_for = [&](double s) {
        Eigen::MatrixXcd A = noise * Eigen::MatrixXcd::Identity(M, M) + P * s * h1 * h1.adjoint() +
                             P * (1.0 - s) * h2 * h2.adjoint();
        Eigen::VectorXcd u1 = A.ldlt().solve(h1), u2 = A.ldlt().solve(h2);
        u1.normalize();
        u2.normalize();
        const double g11 = std::norm(h1.dot(u1)), g12 = std::norm(h1.dot(u2));
        const double g22 = std::norm(h2.dot(u2)), g21 = std::norm(h2.dot(u1));
        auto m1 = [&](double p1) { return g11 * p1 / (g12 * (P - p1) + noise) / eta[0]; };
        auto m2 = [&](double p1) { return g22 * (P - p1) / (g21 * p1 + noise) / eta[1]; };
        double lo = 0.0, hi = P;
        for (int it = 0; it < 200; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (m1(mid) < m2(mid) ? lo : hi) = mid;
        }
        return std::min(m1(lo), m2(lo));
    };
    double best = 0.0, best_s = 0.0;
    for (int i = 0; i <= points; ++i)
    {
        const double s = static_cast<double>(i) / points;
        const double v = margin_for(s);
        if (v > best)
            best = v, best_s = s;
    }
    // local refinement around the best grid point
    double lo = std::max(0.0, best_s - 1.0 / points), hi = std::min(1.0, best_s + 1.0 / points);
    for (int i = 0; i <= 2000; ++i)
        best = std::max(best, margin_for(lo + (hi - lo) * i / 2000.0));
    return best;
}

SystemConfig small_config(int N, int K, int M)
{
    SystemConfig cfg;
    cfg.num_bs = N;
    cfg.num_users = K;
    cfg.num_antennas = M;
    return cfg;
}

} // namespace

TEST_CASE("sinr")
{
    LinkTensor h(1, 1, 1), w(1, 1, 1);
    h(0, 0, 0) = 1.0;
    w(0, 0, 0) = 2.0;
    CHECK(sinr(w, h, 0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
    w(0, 0, 0) = 0.0;
    CHECK(sinr(w, h, 0, 4.0) == 0.0);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i)
    {
        const LinkTensor hh = random_tensor(2, 2, 2, rng);
        const LinkTensor ww = random_tensor(2, 2, 2, rng);
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(sinr(ww, hh, k, 0.3) - oracle_sinr(ww, hh, k, 0.3)) <=
                  1e-12 * std::max(1.0, oracle_sinr(ww, hh, k, 0.3)));
        const auto all = sinr_all(ww, hh, 0.3);
        CHECK(all[1] == sinr(ww, hh, 1, 0.3));
    }
}

TEST_CASE("sinr is invariant under joint channel and noise scaling")
{
    std::mt19937_64 rng(22);
    for (int i = 0; i < 20; ++i)
    {
        const LinkTensor h = random_tensor(3, 3, 3, rng, 1e-5);
        const LinkTensor w = random_tensor(3, 3, 3, rng);
        const double alpha = 1e3;
        LinkTensor hs = h;
        for (auto &v : hs.flat())
            v *= alpha;
        for (int k = 0; k < 3; ++k)
        {
            const double a = sinr(w, h, k, 4e-9), b = sinr(w, hs, k, 4e-9 * alpha * alpha);
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
        }
    }
}

TEST_CASE("bs power")
{
    LinkTensor w(2, 2, 1);
    w(0, 0, 0) = 1.0;
    w(0, 1, 0) = cplx(0.0, 2.0);
    w(1, 1, 0) = 3.0;
    const auto p = bs_power(w);
    CHECK(p[0] == doctest::Approx(5.0));
    CHECK(p[1] == doctest::Approx(9.0));
}

TEST_CASE("effective targets")
{
    const LogisticTable t = default_table(11);
    CHECK(!effective_targets(MappingDesign{{1, 11, 11}}, t, 3.7, 0.9, SinrScale::Db).has_value());

    // a = 0 for every row, so any positive xi_th binds; xi_th = 0 makes the SINR floor bind
    const auto slack = effective_targets(MappingDesign{{2, 5, 11}}, t, 3.7, 0.0, SinrScale::Db);
    REQUIRE(slack.has_value());
    for (double db : slack->db)
        CHECK(db == doctest::Approx(3.7));

    const auto mixed = effective_targets(MappingDesign{{4, 8, 11}}, t, 3.7, 0.6, SinrScale::Db);
    REQUIRE(mixed.has_value());
    const int taus[] = {4, 8, 11};
    for (int k = 0; k < 3; ++k)
    {
        const double need = *min_sinr_for_similarity(t[taus[k]], 0.6);
        CHECK(mixed->db[k] == doctest::Approx(std::max(3.7, need)).epsilon(1e-14));
        CHECK(mixed->linear[k] == doctest::Approx(std::pow(10.0, mixed->db[k] / 10.0)).epsilon(1e-14));
    }
}

TEST_CASE("margin step: single user closed form")
{
    std::mt19937_64 rng(31);
    SystemConfig cfg = small_config(3, 1, 3);
    cfg.max_power_dbm = {30.0, 27.0, 33.0};
    for (int i = 0; i < 100; ++i)
    {
        const LinkTensor h = random_tensor(3, 1, 3, rng, 1e-5);
        double amp = 0.0;
        for (int n = 0; n < 3; ++n)
        {
            double g = 0.0;
            for (auto v : h.link(n, 0))
                g += std::norm(v);
            amp += std::sqrt(cfg.bs_power_mw(n) * g);
        }
        const double closed = amp * amp / cfg.noise_mw();
        const std::vector<double> eta{2.0};
        const auto r = maxmin_margin_step(h, eta, cfg);
        CHECK(std::abs(r.margin - closed / 2.0) <= 1e-4 * closed / 2.0);
        CHECK(std::abs(sinr(r.w, h, 0, cfg.noise_mw()) - closed) <= 1e-4 * closed);
    }
}

TEST_CASE("margin step: no power means no margin")
{
    SystemConfig cfg = small_config(2, 2, 2);
    cfg.max_power_dbm = {-std::numeric_limits<double>::infinity()};
    std::mt19937_64 rng(32);
    const LinkTensor h = random_tensor(2, 2, 2, rng, 1e-5);
    const std::vector<double> eta{1.0, 1.0};
    CHECK(maxmin_margin_step(h, eta, cfg).margin == 0.0);
}

TEST_CASE("margin step: K=2, N=1, M=2 grid oracle")
{
    std::mt19937_64 rng(33);
    const SystemConfig cfg = small_config(1, 2, 2);
    std::uniform_real_distribution<double> u(0.5, 20.0);
    for (int i = 0; i < 30; ++i)
    {
        const LinkTensor h = random_tensor(1, 2, 2, rng, 2e-5);
        const std::vector<double> eta{u(rng), u(rng)};
        const auto r = maxmin_margin_step(h, eta, cfg);
        const double oracle = grid_oracle(h, eta, cfg.bs_power_mw(0), cfg.noise_mw(), 400);
        CHECK(std::abs(r.margin - oracle) <= 1e-3 * oracle);
        CHECK(r.margin <= r.upper * (1.0 + 1e-12));

        // certificate: the returned w achieves the margin within the budget
        for (int k = 0; k < 2; ++k)
            CHECK(sinr(r.w, h, k, cfg.noise_mw()) >= r.margin * eta[k] * (1.0 - 1e-9));
        CHECK(bs_power(r.w)[0] <= cfg.bs_power_mw(0) * (1.0 + 1e-9));
    }
}

TEST_CASE("margin step: warm start never loses ground")
{
    std::mt19937_64 rng(34);
    const SystemConfig cfg = small_config(3, 3, 3);
    for (int i = 0; i < 10; ++i)
    {
        const LinkTensor h = random_tensor(3, 3, 3, rng, 1e-5);
        const std::vector<double> eta{2.0, 3.0, 5.0};
        const auto cold = maxmin_margin_step(h, eta, cfg);
        const auto warm = maxmin_margin_step(h, eta, cfg, &cold.w);
        CHECK(warm.margin >= cold.margin * (1.0 - 1e-6));
        CHECK(std::abs(warm.margin - cold.margin) <= 1e-5 * cold.margin);
    }
}

TEST_CASE("eta step")
{
    std::mt19937_64 rng(35);
    const SystemConfig cfg = small_config(2, 2, 2);
    const LogisticTable t = default_table(11);
    const LinkTensor h = random_tensor(2, 2, 2, rng, 1e-5);
    const LinkTensor w = random_tensor(2, 2, 2, rng, 3.0);
    const SinrTargets eta = eta_step(w, h, cfg.noise_mw());
    for (int k = 0; k < 2; ++k)
        CHECK(eta.linear[k] == sinr(w, h, k, cfg.noise_mw()));

    // 1-D numeric maximization of each term over eta_k <= sinr_k lands on the cap
    const MappingDesign m{{6, 9}};
    for (int k = 0; k < 2; ++k)
    {
        const auto &p = t[m.tau[k]];
        const double cap_db = eta.db[k];
        double best_x = -60.0, best_v = -1.0;
        for (int i = 0; i <= 20000; ++i)
        {
            const double x = -60.0 + (cap_db + 60.0) * i / 20000.0;
            const double v = similarity(p, x);
            if (v > best_v)
                best_v = v, best_x = x;
        }
        CHECK(std::abs(best_x - cap_db) <= 1e-9 * std::max(1.0, std::abs(cap_db)));
    }

    // raising every SINR raises every eta
    LinkTensor stronger = w;
    for (auto &v : stronger.flat())
        v *= 2.0;
    const SinrTargets eta2 = eta_step(stronger, h, cfg.noise_mw());
    for (int k = 0; k < 2; ++k)
        CHECK(eta2.linear[k] >= eta.linear[k]);
}

TEST_CASE("solve_beamforming")
{
    SystemConfig cfg;
    const LogisticTable table = default_table(cfg.max_symbols_per_word);
    const Geometry g = build_scenario(cfg);

    SUBCASE("unreachable similarity exits before any solve")
    {
        const auto o = solve_beamforming(MappingDesign{{1, 11, 11}}, sample_channel(g, cfg, 1), table, cfg);
        CHECK(!o.feasible);
        CHECK(o.sse_value == 0.0);
        CHECK(o.iterations == 0);
    }

    SUBCASE("single user matches the closed form")
    {
        SystemConfig one = cfg;
        one.num_users = 1;
        one.similarity_threshold = 0.5;
        const Geometry g1 = build_scenario(one);
        int checked = 0;
        for (int t = 1; t <= 40; ++t)
        {
            const ChannelState ch = sample_channel(g1, one, t);
            double amp = 0.0;
            for (int n = 0; n < one.num_bs; ++n)
            {
                double gain = 0.0;
                for (auto v : ch.h.link(n, 0))
                    gain += std::norm(v);
                amp += std::sqrt(one.bs_power_mw(n) * gain);
            }
            const double closed_db = 10.0 * std::log10(amp * amp / one.noise_mw());
            const int tau = 8;
            const auto o = solve_beamforming(MappingDesign{{tau}}, ch, table, one);
            const auto req = effective_targets(MappingDesign{{tau}}, table, one.sinr_threshold_db,
                                               one.similarity_threshold, one.sinr_scale);
            if (closed_db < req->db[0])
            {
                CHECK(!o.feasible);
                continue;
            }
            REQUIRE(o.feasible);
            const double expect = sse_user(40.0, 4.0, tau, similarity(table[tau], closed_db));
            CHECK(std::abs(o.sse_value - expect) <= 1e-4 * expect);
            ++checked;
        }
        CHECK(checked > 5);
    }

    SUBCASE("feasible outcomes are certified and ascend")
    {
        int feasible = 0;
        for (int t = 1; t <= 60; ++t)
        {
            const ChannelState ch = sample_channel(g, cfg, t);
            const MappingDesign m{{8 + t % 4, 8 + (t / 4) % 4, 11 - t % 3}};
            const auto o = solve_beamforming(m, ch, table, cfg);
            if (!o.feasible)
            {
                CHECK(o.sse_value == 0.0);
                continue;
            }
            ++feasible;
            CHECK(o.iterations >= 1);
            CHECK(o.iterations <= cfg.solver.max_iterations);
            for (std::size_t j = 1; j < o.margin_trace.size(); ++j)
                CHECK(o.margin_trace[j].objective >= o.margin_trace[j - 1].objective - 1e-8);
            const auto p = bs_power(o.w);
            for (int n = 0; n < cfg.num_bs; ++n)
                CHECK(p[n] <= cfg.bs_power_mw(n) * (1.0 + 1e-6));
            const auto s = sinr_all(o.w, ch.h, cfg.noise_mw());
            for (int k = 0; k < cfg.num_users; ++k)
            {
                CHECK(10.0 * std::log10(s[k]) >= cfg.sinr_threshold_db - 1e-6);
                CHECK(similarity(table[m.tau[k]], 10.0 * std::log10(s[k])) >=
                      cfg.similarity_threshold * (1.0 - 1e-6));
            }
            CHECK(o.sse_value == doctest::Approx(total_sse(m, o.eta.db, table, cfg)).epsilon(1e-12));
        }
        CHECK(feasible > 5);
    }
}

TEST_CASE("feasibility margin")
{
    SystemConfig cfg;
    cfg.max_symbols_per_word = 5;
    cfg.similarity_threshold = 0.6;
    const LogisticTable table = default_table(5);
    const Geometry g = build_scenario(cfg);

    CHECK(feasibility_margin(MappingDesign{{1, 5, 5}}, sample_channel(g, cfg, 1), table, cfg) == 0.0);

    int feasible = 0, infeasible = 0;
    for (int t = 1; t <= 30; ++t)
    {
        const ChannelState ch = sample_channel(g, cfg, t);
        const MappingDesign m{{3 + t % 3, 3 + (t / 3) % 3, 5 - t % 2}};
        const double margin = feasibility_margin(m, ch, table, cfg);
        const bool ok = solve_beamforming(m, ch, table, cfg).feasible;
        CHECK(ok == (margin >= 1.0));
        feasible += ok;
        infeasible += !ok;
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);

    SUBCASE("single user: closed-form SNR over the target")
    {
        SystemConfig one = cfg;
        one.num_users = 1;
        const Geometry g1 = build_scenario(one);
        for (int t = 1; t <= 10; ++t)
        {
            const ChannelState ch = sample_channel(g1, one, t);
            double amp = 0.0;
            for (int n = 0; n < one.num_bs; ++n)
            {
                double gain = 0.0;
                for (auto v : ch.h.link(n, 0))
                    gain += std::norm(v);
                amp += std::sqrt(one.bs_power_mw(n) * gain);
            }
            const auto req =
                effective_targets(MappingDesign{{4}}, table, one.sinr_threshold_db, one.similarity_threshold, one.sinr_scale);
            const double expect = amp * amp / one.noise_mw() / req->linear[0];
            CHECK(feasibility_margin(MappingDesign{{4}}, ch, table, one) == doctest::Approx(expect).epsilon(1e-9));
        }
    }
}
