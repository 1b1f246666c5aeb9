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

#ifndef JPSEM_SCENARIO_HPP
#define JPSEM_SCENARIO_HPP

#include "jpsem/config.hpp"
#include "jpsem/tensor.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace jpsem
{

// Random stream identifiers. Every random draw in the simulator comes from a
// generator seeded by derive_seed(master, {tag, indices...}).
enum class Stream : std::uint64_t
{
    BsPosition = 1,
    UserPosition = 2,
    Channel = 3,
    RandomMapping = 4,
    PolicyInit = 5,
    ReplaySampling = 6,
};

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);
std::mt19937_64 make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Smallest BS-user distance used for path loss (1 m)
inline constexpr double kMinDistanceKm = 1e-3;

struct Geometry
{
    std::vector<Point2> bs_positions;   // km
    std::vector<Point2> user_positions; // km
    std::vector<double> distances;      // N x K, row-major by BS, km

    double distance(int n, int k) const { return distances[static_cast<std::size_t>(n) * user_positions.size() + k]; }
    bool operator==(const Geometry &) const = default;
};

struct ChannelState
{
    LinkTensor h; // linear amplitude, sqrt(mW gain)
    int slot = 0;
};

// Places BSs and users uniformly on the cell disk (or at the configured
// positions). BS n and user k use their own streams, so enlarging N or K keeps
// the existing nodes in place.
Geometry build_scenario(const SystemConfig &cfg, std::uint64_t seed);
Geometry build_scenario(const SystemConfig &cfg);

// 128.1 + 37.6 log10(d), d in km
double path_loss_db(double distance_km);

// Large-scale gain times a Rayleigh vector per (n, k). Each link of each slot has
// its own stream, so slots are independent of generation order and the first M
// antennas of a larger array coincide with a smaller one.
ChannelState sample_channel(const Geometry &geometry, const SystemConfig &cfg, int slot);

} // namespace jpsem

#endif
