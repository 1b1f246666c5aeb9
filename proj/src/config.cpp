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

#include "jpsem/config.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/units.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace jpsem
{

double SystemConfig::bs_power_mw(int n) const
{
    const double dbm = max_power_dbm.size() == 1 ? max_power_dbm[0] : max_power_dbm.at(n);
    return dbm_to_linear(dbm);
}

double SystemConfig::noise_mw() const
{
    return dbm_to_linear(noise_power_dbm);
}

double SystemConfig::info(int k) const
{
    return semantic_info.size() == 1 ? semantic_info[0] : semantic_info.at(k);
}

double SystemConfig::words(int k) const
{
    return words_per_file.size() == 1 ? words_per_file[0] : words_per_file.at(k);
}

int SystemConfig::num_candidates() const
{
    if (learning.candidates > 0)
        return learning.candidates;
    return static_cast<int>(std::min<double>(num_users, lattice_size()));
}

double SystemConfig::lattice_size() const
{
    return std::pow(static_cast<double>(max_symbols_per_word), num_users);
}

namespace
{

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw ConfigError(msg);
}

bool inside_disk(const Point2 &p, double radius)
{
    return std::hypot(p[0], p[1]) <= radius * (1.0 + 1e-12);
}

std::vector<double> number_list(const toml::Value &v)
{
    if (v.is_number())
        return {v.as_double()};
    std::vector<double> out;
    for (const auto &e : v.as_array())
        out.push_back(e.as_double());
    return out;
}

std::vector<Point2> point_list(const toml::Value &v)
{
    std::vector<Point2> out;
    for (const auto &e : v.as_array())
    {
        const auto &xy = e.as_array();
        if (xy.size() != 2)
            throw ConfigError("positions must be [x, y] pairs in km");
        out.push_back({xy[0].as_double(), xy[1].as_double()});
    }
    return out;
}

int as_count(const toml::Value &v)
{
    const auto i = v.as_integer();
    if (i < 0 || i > 1'000'000'000)
        throw ConfigError("count out of range");
    return static_cast<int>(i);
}

using Setter = std::function<void(SystemConfig &, const toml::Value &)>;

const std::map<std::string, std::map<std::string, Setter>> &setters()
{
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"network",
         {
             {"num_bs", [](SystemConfig &c, const toml::Value &v) { c.num_bs = as_count(v); }},
             {"num_users", [](SystemConfig &c, const toml::Value &v) { c.num_users = as_count(v); }},
             {"num_antennas", [](SystemConfig &c, const toml::Value &v) { c.num_antennas = as_count(v); }},
             {"num_slots", [](SystemConfig &c, const toml::Value &v) { c.num_slots = as_count(v); }},
             {"cell_radius_km", [](SystemConfig &c, const toml::Value &v) { c.cell_radius_km = v.as_double(); }},
             {"shadowing_std_db", [](SystemConfig &c, const toml::Value &v) { c.shadowing_std_db = v.as_double(); }},
             {"rayleigh_fading", [](SystemConfig &c, const toml::Value &v) { c.rayleigh_fading = v.as_bool(); }},
             {"seed", [](SystemConfig &c, const toml::Value &v) { c.seed = static_cast<std::uint64_t>(v.as_integer()); }},
             {"bs_positions", [](SystemConfig &c, const toml::Value &v) { c.bs_positions = point_list(v); }},
             {"user_positions", [](SystemConfig &c, const toml::Value &v) { c.user_positions = point_list(v); }},
         }},
        {"power",
         {
             {"max_power_dbm", [](SystemConfig &c, const toml::Value &v) { c.max_power_dbm = number_list(v); }},
             {"noise_power_dbm", [](SystemConfig &c, const toml::Value &v) { c.noise_power_dbm = v.as_double(); }},
         }},
        {"semantic",
         {
             {"sinr_threshold_db", [](SystemConfig &c, const toml::Value &v) { c.sinr_threshold_db = v.as_double(); }},
             {"similarity_threshold", [](SystemConfig &c, const toml::Value &v) { c.similarity_threshold = v.as_double(); }},
             {"max_symbols_per_word", [](SystemConfig &c, const toml::Value &v) { c.max_symbols_per_word = as_count(v); }},
             {"semantic_info", [](SystemConfig &c, const toml::Value &v) { c.semantic_info = number_list(v); }},
             {"words_per_file", [](SystemConfig &c, const toml::Value &v) { c.words_per_file = number_list(v); }},
             {"sinr_scale",
              [](SystemConfig &c, const toml::Value &v)
              {
                  const auto &s = v.as_string();
                  if (s == "db")
                      c.sinr_scale = SinrScale::Db;
                  else if (s == "linear")
                      c.sinr_scale = SinrScale::Linear;
                  else
                      throw ConfigError("sinr_scale must be \"db\" or \"linear\"");
              }},
             {"table", [](SystemConfig &c, const toml::Value &v) { c.table_path = v.as_string(); }},
         }},
        {"solver",
         {
             {"bisection_tolerance", [](SystemConfig &c, const toml::Value &v) { c.solver.bisection_tolerance = v.as_double(); }},
             {"max_iterations", [](SystemConfig &c, const toml::Value &v) { c.solver.max_iterations = as_count(v); }},
             {"objective_tolerance", [](SystemConfig &c, const toml::Value &v) { c.solver.objective_tolerance = v.as_double(); }},
             {"constraint_tolerance", [](SystemConfig &c, const toml::Value &v) { c.solver.constraint_tolerance = v.as_double(); }},
             {"duality_gap_tolerance", [](SystemConfig &c, const toml::Value &v) { c.solver.duality_gap_tolerance = v.as_double(); }},
         }},
        {"learning",
         {
             {"hidden_layers",
              [](SystemConfig &c, const toml::Value &v)
              {
                  c.learning.hidden_layers.clear();
                  for (const auto &e : v.as_array())
                      c.learning.hidden_layers.push_back(as_count(e));
              }},
             {"learning_rate", [](SystemConfig &c, const toml::Value &v) { c.learning.learning_rate = v.as_double(); }},
             {"memory_capacity", [](SystemConfig &c, const toml::Value &v) { c.learning.memory_capacity = as_count(v); }},
             {"batch_size", [](SystemConfig &c, const toml::Value &v) { c.learning.batch_size = as_count(v); }},
             {"update_interval", [](SystemConfig &c, const toml::Value &v) { c.learning.update_interval = as_count(v); }},
             {"candidates", [](SystemConfig &c, const toml::Value &v) { c.learning.candidates = as_count(v); }},
             {"feature_offset_db", [](SystemConfig &c, const toml::Value &v) { c.learning.feature_offset_db = v.as_double(); }},
             {"feature_scale_db", [](SystemConfig &c, const toml::Value &v) { c.learning.feature_scale_db = v.as_double(); }},
         }},
        {"harness",
         {
             {"oms_cap", [](SystemConfig &c, const toml::Value &v) { c.oms_cap = v.as_double(); }},
             {"record_timing", [](SystemConfig &c, const toml::Value &v) { c.record_timing = v.as_bool(); }},
         }},
    };
    return table;
}

} // namespace

void validate(const SystemConfig &c)
{
    require(c.num_bs >= 1, "num_bs must be >= 1");
    require(c.num_users >= 1, "num_users must be >= 1");
    require(c.num_antennas >= 1, "num_antennas must be >= 1");
    require(c.num_slots >= 1, "num_slots must be >= 1");
    require(c.max_symbols_per_word >= 1, "max_symbols_per_word must be >= 1");
    require(std::isfinite(c.cell_radius_km) && c.cell_radius_km > 0.0, "cell_radius_km must be positive");
    require(std::isfinite(c.shadowing_std_db) && c.shadowing_std_db >= 0.0, "shadowing_std_db must be >= 0");
    require(c.similarity_threshold > 0.0 && c.similarity_threshold < 1.0, "similarity_threshold must lie in (0, 1)");
    require(std::isfinite(c.sinr_threshold_db), "sinr_threshold_db must be finite");
    require(std::isfinite(c.noise_power_dbm), "noise_power_dbm must be finite");

    require(c.max_power_dbm.size() == 1 || static_cast<int>(c.max_power_dbm.size()) == c.num_bs,
            "max_power_dbm needs one entry or one per BS");
    for (double p : c.max_power_dbm)
        require(std::isfinite(p), "max_power_dbm must be finite");

    require(c.semantic_info.size() == 1 || static_cast<int>(c.semantic_info.size()) == c.num_users,
            "semantic_info needs one entry or one per user");
    require(c.words_per_file.size() == 1 || static_cast<int>(c.words_per_file.size()) == c.num_users,
            "words_per_file needs one entry or one per user");
    for (double v : c.semantic_info)
        require(std::isfinite(v) && v > 0.0, "semantic_info must be positive");
    for (double v : c.words_per_file)
        require(std::isfinite(v) && v > 0.0, "words_per_file must be positive");

    if (!c.bs_positions.empty())
    {
        require(static_cast<int>(c.bs_positions.size()) == c.num_bs, "bs_positions needs one entry per BS");
        for (const auto &p : c.bs_positions)
            require(inside_disk(p, c.cell_radius_km), "bs_positions must lie inside the cell disk");
    }
    if (!c.user_positions.empty())
    {
        require(static_cast<int>(c.user_positions.size()) == c.num_users, "user_positions needs one entry per user");
        for (const auto &p : c.user_positions)
            require(inside_disk(p, c.cell_radius_km), "user_positions must lie inside the cell disk");
    }

    const auto &s = c.solver;
    require(s.bisection_tolerance > 0.0 && s.bisection_tolerance < 1.0, "bisection_tolerance must lie in (0, 1)");
    require(s.max_iterations >= 1, "max_iterations must be >= 1");
    require(s.objective_tolerance > 0.0, "objective_tolerance must be positive");
    require(s.constraint_tolerance > 0.0, "constraint_tolerance must be positive");
    require(s.duality_gap_tolerance > 0.0 && s.duality_gap_tolerance < 1e-3, "duality_gap_tolerance must lie in (0, 1e-3)");

    const auto &l = c.learning;
    for (int w : l.hidden_layers)
        require(w >= 1, "hidden layer widths must be >= 1");
    require(l.learning_rate > 0.0, "learning_rate must be positive");
    require(l.memory_capacity >= 1, "memory_capacity must be >= 1");
    require(l.batch_size >= 1, "batch_size must be >= 1");
    require(l.update_interval >= 1, "update_interval must be >= 1");
    require(l.feature_scale_db > 0.0, "feature_scale_db must be positive");
    const int e = c.num_candidates();
    require(e >= 1 && static_cast<double>(e) <= c.lattice_size(), "candidates E must lie in [1, Gamma^K]");

    require(c.oms_cap >= 1.0, "oms_cap must be >= 1");
}

void apply_document(SystemConfig &cfg, const toml::Document &doc)
{
    const auto &known = setters();
    for (const auto &[section, entries] : doc)
    {
        const auto it = known.find(section);
        if (it == known.end())
        {
            if (section.empty() && !entries.empty())
                throw ConfigError("top-level keys are not allowed; use a [section]");
            continue; // sections owned by other readers, e.g. [experiment]
        }
        for (const auto &[key, value] : entries)
        {
            const auto s = it->second.find(key);
            if (s == it->second.end())
                throw ConfigError("unknown key '" + section + "." + key + "'");
            try
            {
                s->second(cfg, value);
            }
            catch (const ConfigError &e)
            {
                throw ConfigError(section + "." + key + ": " + e.what());
            }
        }
    }
}

SystemConfig load_config(const std::string &path)
{
    SystemConfig cfg;
    apply_document(cfg, toml::parse_file(path));
    validate(cfg);
    return cfg;
}

void set_field(SystemConfig &cfg, const std::string &name, double value)
{
    const auto as_int = [&]()
    {
        const double r = std::round(value);
        if (std::abs(r - value) > 1e-9)
            throw ConfigError("sweep value for '" + name + "' must be an integer");
        return static_cast<int>(r);
    };
    if (name == "similarity_threshold")
        cfg.similarity_threshold = value;
    else if (name == "sinr_threshold_db")
        cfg.sinr_threshold_db = value;
    else if (name == "num_antennas")
        cfg.num_antennas = as_int();
    else if (name == "num_bs")
        cfg.num_bs = as_int();
    else if (name == "num_users")
        cfg.num_users = as_int();
    else if (name == "max_power_dbm")
        cfg.max_power_dbm = {value};
    else
        throw ConfigError("unsupported sweep variable '" + name + "'");
}

} // namespace jpsem
