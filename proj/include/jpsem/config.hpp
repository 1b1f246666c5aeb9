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

#ifndef JPSEM_CONFIG_HPP
#define JPSEM_CONFIG_HPP

#include "jpsem/toml_lite.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jpsem
{

using Point2 = std::array<double, 2>; // km

// Scale of the SINR argument of the logistic similarity curve
enum class SinrScale
{
    Db,
    Linear
};

struct SolverSettings
{
    double bisection_tolerance = 1e-6;  // relative width of the max-min margin bracket
    int max_iterations = 50;            // alternation cap J_max
    double objective_tolerance = 1e-4;  // |delta R'| stopping threshold
    double constraint_tolerance = 1e-6; // used when certifying outcomes
    double duality_gap_tolerance = 1e-9; // interior-point accuracy
};

struct LearningSettings
{
    std::vector<int> hidden_layers = {120, 80};
    double learning_rate = 1e-3;
    int memory_capacity = 1024;
    int batch_size = 128;
    int update_interval = 10; // Delta
    int candidates = 0;       // E; 0 selects min(K, Gamma^K)
    double feature_offset_db = -100.0;
    double feature_scale_db = 10.0;
};

struct SystemConfig
{
    // network
    int num_bs = 3;       // N
    int num_users = 3;    // K
    int num_antennas = 3; // M
    int num_slots = 1000; // T
    double cell_radius_km = 0.5;
    double shadowing_std_db = 8.0;
    bool rayleigh_fading = true; // false replaces the fading vector by all ones
    std::uint64_t seed = 1;
    std::vector<Point2> bs_positions;   // optional explicit placement
    std::vector<Point2> user_positions; // optional explicit placement

    // power
    std::vector<double> max_power_dbm = {30.0}; // one entry or one per BS
    double noise_power_dbm = -83.98;

    // semantic layer
    double sinr_threshold_db = 3.7;      // gamma_th
    double similarity_threshold = 0.9;   // xi_th
    int max_symbols_per_word = 11;       // Gamma
    std::vector<double> semantic_info = {40.0};  // I_k in suts, one entry or one per user
    std::vector<double> words_per_file = {4.0};  // L_k in words, one entry or one per user
    SinrScale sinr_scale = SinrScale::Db;
    std::string table_path; // empty -> built-in table

    SolverSettings solver;
    LearningSettings learning;

    // harness
    double oms_cap = 1e5;
    bool record_timing = false;

    double bs_power_mw(int n) const;
    double noise_mw() const;
    double info(int k) const;
    double words(int k) const;
    int num_candidates() const; // resolved E (default min(K, Gamma^K))
    double lattice_size() const; // Gamma^K as a double
};

// Throws ConfigError when an invariant is violated
void validate(const SystemConfig &cfg);

// Applies the recognized sections of a parsed document on top of cfg
void apply_document(SystemConfig &cfg, const toml::Document &doc);

SystemConfig load_config(const std::string &path);

// Sets one named field (used by sweeps): "similarity_threshold", "num_antennas", "num_bs", ...
void set_field(SystemConfig &cfg, const std::string &name, double value);

} // namespace jpsem

#endif
