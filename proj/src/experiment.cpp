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

#include "jpsem/experiment.hpp"
#include "jpsem/baselines.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/toml_lite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace jpsem
{

std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::Dsmra: return "DSMRA";
    case Scheme::Oms: return "OMS";
    case Scheme::Rms: return "RMS";
    case Scheme::Mms: return "MMS";
    }
    return "?";
}

Scheme parse_scheme(const std::string &name)
{
    std::string u;
    for (char c : name)
        u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "DSMRA")
        return Scheme::Dsmra;
    if (u == "OMS")
        return Scheme::Oms;
    if (u == "RMS")
        return Scheme::Rms;
    if (u == "MMS")
        return Scheme::Mms;
    throw ConfigError("unknown scheme '" + name + "' (expected dsmra, oms, rms or mms)");
}

std::string canonical_variable(const std::string &name)
{
    static const std::map<std::string, std::string> alias = {
        {"similarity_threshold", "similarity_threshold"},
        {"xi_th", "similarity_threshold"},
        {"num_antennas", "num_antennas"},
        {"M", "num_antennas"},
        {"num_bs", "num_bs"},
        {"N", "num_bs"},
    };
    const auto it = alias.find(name);
    if (it == alias.end())
        throw ConfigError("sweep variable must be similarity_threshold, num_antennas or num_bs, got '" + name + "'");
    return it->second;
}

void validate(const ExperimentSpec &spec)
{
    canonical_variable(spec.variable);
    if (spec.values.empty())
        throw ConfigError("experiment needs at least one sweep value");
    if (spec.seeds.empty())
        throw ConfigError("experiment needs at least one seed");
    if (spec.schemes.empty())
        throw ConfigError("experiment needs at least one scheme");
    if (spec.slots < 1)
        throw ConfigError("experiment slots must be positive");
    for (double v : spec.values)
    {
        SystemConfig cfg = spec.base;
        set_field(cfg, canonical_variable(spec.variable), v);
        validate(cfg);
        if (std::find(spec.schemes.begin(), spec.schemes.end(), Scheme::Oms) != spec.schemes.end() &&
            cfg.lattice_size() > cfg.oms_cap)
            throw ConfigError("OMS requested but Gamma^K exceeds oms_cap");
    }
}

ExperimentSpec load_experiment(const std::string &path)
{
    const toml::Document doc = toml::parse_file(path);
    ExperimentSpec spec;
    apply_document(spec.base, doc);
    validate(spec.base);

    const auto it = doc.find("experiment");
    if (it == doc.end())
        throw ConfigError("'" + path + "' has no [experiment] table");
    for (const auto &[key, value] : it->second)
    {
        try
        {
            if (key == "variable")
                spec.variable = canonical_variable(value.as_string());
            else if (key == "values")
            {
                spec.values.clear();
                for (const auto &v : value.as_array())
                    spec.values.push_back(v.as_double());
            }
            else if (key == "schemes")
            {
                spec.schemes.clear();
                for (const auto &v : value.as_array())
                    spec.schemes.push_back(parse_scheme(v.as_string()));
            }
            else if (key == "seeds")
            {
                spec.seeds.clear();
                for (const auto &v : value.as_array())
                {
                    if (v.as_integer() < 0)
                        throw ConfigError("seeds must be non-negative");
                    spec.seeds.push_back(static_cast<std::uint64_t>(v.as_integer()));
                }
            }
            else if (key == "slots")
                spec.slots = static_cast<int>(value.as_integer());
            else
                throw ConfigError("unknown key");
        }
        catch (const ConfigError &e)
        {
            throw ConfigError("experiment." + key + ": " + e.what());
        }
    }
    if (spec.schemes.empty())
        spec.schemes = {Scheme::Dsmra, Scheme::Oms, Scheme::Rms, Scheme::Mms};
    if (spec.seeds.empty())
        spec.seeds = {spec.base.seed};
    validate(spec);
    return spec;
}

std::vector<SlotTrace> run_scheme(Scheme scheme, const SystemConfig &cfg, const LogisticTable &table, int warmup,
                                  int measured, std::vector<SlotTrace> *full_trace)
{
    const Geometry g = build_scenario(cfg);
    const int first = warmup + 1, last = warmup + measured;
    std::vector<SlotTrace> trace;
    switch (scheme)
    {
    case Scheme::Dsmra: {
        auto all = dsmra_run(g, cfg, table, 1, last);
        trace.assign(all.begin() + warmup, all.end());
        if (full_trace)
            *full_trace = std::move(all);
        return trace;
    }
    case Scheme::Oms: trace = run_oms(g, cfg, table, first, last); break;
    case Scheme::Rms: trace = run_rms(g, cfg, table, first, last); break;
    case Scheme::Mms: trace = run_mms(g, cfg, table, first, last); break;
    }
    if (full_trace)
        *full_trace = trace;
    return trace;
}

ResultRow summarize(const std::vector<SlotTrace> &window, Scheme scheme, const std::string &var, double value,
                    std::uint64_t seed)
{
    ResultRow r{to_string(scheme), var, value, seed, 0.0, 0.0, 0.0, 0.0};
    if (window.empty())
        return r;
    const double n = static_cast<double>(window.size());
    double sum = 0.0, ms = 0.0, feas = 0.0;
    for (const auto &s : window)
    {
        sum += s.sse;
        ms += s.solve_ms;
        feas += s.feasible ? 1.0 : 0.0;
    }
    r.mean_sse = sum / n;
    double ss = 0.0;
    for (const auto &s : window)
        ss += (s.sse - r.mean_sse) * (s.sse - r.mean_sse);
    r.std_sse = std::sqrt(ss / n);
    r.mean_solve_ms = ms / n;
    r.feasibility_rate = feas / n;
    return r;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec &spec, const std::function<void(const ResultRow &)> &progress)
{
    validate(spec);
    const std::string var = canonical_variable(spec.variable);
    std::vector<ResultRow> rows;
    for (double value : spec.values)
        for (std::uint64_t seed : spec.seeds)
        {
            SystemConfig cfg = spec.base;
            set_field(cfg, var, value);
            cfg.seed = seed;
            validate(cfg);
            const LogisticTable table = table_for(cfg);
            for (Scheme s : spec.schemes)
            {
                const auto window = run_scheme(s, cfg, table, spec.slots, spec.slots);
                rows.push_back(summarize(window, s, var, value, seed));
                if (progress)
                    progress(rows.back());
            }
        }
    std::sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return std::tie(a.scheme, a.sweep_value, a.seed) < std::tie(b.scheme, b.sweep_value, b.seed);
    });
    return rows;
}

} // namespace jpsem
