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

#include "jpsem/scenario.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/units.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace jpsem
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Point2 uniform_on_disk(std::mt19937_64 &rng, double radius)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t s = splitmix64(master);
    for (auto p : path)
        s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

std::mt19937_64 make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    return std::mt19937_64(derive_seed(master, path));
}

Geometry build_scenario(const SystemConfig &cfg, std::uint64_t seed)
{
    if (!(cfg.cell_radius_km > 0.0) || !std::isfinite(cfg.cell_radius_km))
        throw ConfigError("cell radius must be positive");

    Geometry g;
    const auto stream = [](Stream s) { return static_cast<std::uint64_t>(s); };
    for (int n = 0; n < cfg.num_bs; ++n)
    {
        if (!cfg.bs_positions.empty())
            g.bs_positions.push_back(cfg.bs_positions.at(n));
        else
        {
            auto rng = make_rng(seed, {stream(Stream::BsPosition), static_cast<std::uint64_t>(n)});
            g.bs_positions.push_back(uniform_on_disk(rng, cfg.cell_radius_km));
        }
    }
    for (int k = 0; k < cfg.num_users; ++k)
    {
        if (!cfg.user_positions.empty())
            g.user_positions.push_back(cfg.user_positions.at(k));
        else
        {
            auto rng = make_rng(seed, {stream(Stream::UserPosition), static_cast<std::uint64_t>(k)});
            g.user_positions.push_back(uniform_on_disk(rng, cfg.cell_radius_km));
        }
    }

    g.distances.resize(static_cast<std::size_t>(cfg.num_bs) * cfg.num_users);
    for (int n = 0; n < cfg.num_bs; ++n)
        for (int k = 0; k < cfg.num_users; ++k)
        {
            const auto &b = g.bs_positions[n];
            const auto &u = g.user_positions[k];
            const double d = std::hypot(b[0] - u[0], b[1] - u[1]);
            g.distances[static_cast<std::size_t>(n) * cfg.num_users + k] = std::max(d, kMinDistanceKm);
        }
    return g;
}

Geometry build_scenario(const SystemConfig &cfg)
{
    return build_scenario(cfg, cfg.seed);
}

double path_loss_db(double distance_km)
{
    if (!(distance_km > 0.0))
        throw std::domain_error("path loss needs a positive distance");
    return 128.1 + 37.6 * std::log10(distance_km);
}

ChannelState sample_channel(const Geometry &geometry, const SystemConfig &cfg, int slot)
{
    const int N = static_cast<int>(geometry.bs_positions.size());
    const int K = static_cast<int>(geometry.user_positions.size());
    const int M = cfg.num_antennas;
    if (N != cfg.num_bs || K != cfg.num_users)
        throw ConfigError("geometry does not match the configuration");

    ChannelState state{LinkTensor(N, K, M), slot};
    const double half = std::sqrt(0.5);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < K; ++k)
        {
            auto rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(Stream::Channel), static_cast<std::uint64_t>(slot),
                                           static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)});
            std::normal_distribution<double> normal(0.0, 1.0);
            const double shadow_db = cfg.shadowing_std_db * normal(rng);
            const double amplitude = std::sqrt(db_to_linear(-path_loss_db(geometry.distance(n, k)) - shadow_db));
            auto link = state.h.link(n, k);
            for (int m = 0; m < M; ++m)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                const cplx g = cfg.rayleigh_fading ? cplx(half * re, half * im) : cplx(1.0, 0.0);
                link[m] = amplitude * g;
            }
        }
    return state;
}

} // namespace jpsem
