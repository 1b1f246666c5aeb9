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

// Command-line front end.
//
//   jpsem run          --config cfg.toml [--scheme dsmra] [--seed S] [--table t.csv] [--out dir] [--timing]
//   jpsem baseline     --scheme oms|rms|mms [same flags as run]
//   jpsem sweep        --config experiment.toml [--seed S] [--table t.csv] [--out dir] [--timing]
//   jpsem fit-logistic --samples samples.csv [--tau 1] [--out dir]
//
// Success prints one JSON summary line on stdout. Failure prints one JSON line
// {"status":"error","kind":...,"message":...} on stderr and exits nonzero.

#include "jpsem/baselines.hpp"
#include "jpsem/csv.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/experiment.hpp"
#include "jpsem/learning.hpp"
#include "jpsem/results_io.hpp"
#include "jpsem/semantics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace jpsem;

namespace
{

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::string scheme;
    std::string table;
    bool timing = false;
};

void add_common(CLI::App *cmd, Common &c, bool with_scheme)
{
    cmd->add_option("--config", c.config, "TOML configuration file");
    cmd->add_option("--seed", c.seed, "master seed (overrides the config)");
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    cmd->add_option("--table", c.table, "logistic table CSV (tau,a,b,c,d)");
    cmd->add_flag("--timing", c.timing, "record wall-clock solve times (output is then not byte-reproducible)");
    if (with_scheme)
        cmd->add_option("--scheme", c.scheme, "dsmra, oms, rms or mms");
}

void apply_overrides(SystemConfig &cfg, const Common &c)
{
    if (c.seed)
        cfg.seed = *c.seed;
    if (!c.table.empty())
        cfg.table_path = c.table;
    if (c.timing)
        cfg.record_timing = true;
    validate(cfg);
}

fs::path prepare_out(const std::string &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir + "': " + ec.message());
    return fs::path(dir);
}

int cmd_run(const Common &c, Scheme scheme, const std::string &command)
{
    SystemConfig cfg = c.config.empty() ? SystemConfig{} : load_config(c.config);
    apply_overrides(cfg, c);
    if (scheme == Scheme::Oms)
        check_oms_cap(cfg);
    const LogisticTable table = table_for(cfg);
    const fs::path out = prepare_out(c.out);

    const int T = cfg.num_slots;
    const Geometry g = build_scenario(cfg);
    std::vector<SlotTrace> trace;
    int warmup = 0;
    if (scheme == Scheme::Dsmra)
    {
        DsmraAgent agent(cfg);
        trace = dsmra_run(g, cfg, table, 1, T, &agent);
        warmup = T / 2;
        agent.network().save((out / "policy.ckpt").string());
    }
    else if (scheme == Scheme::Oms)
        trace = run_oms(g, cfg, table, 1, T);
    else if (scheme == Scheme::Rms)
        trace = run_rms(g, cfg, table, 1, T);
    else
        trace = run_mms(g, cfg, table, 1, T);

    const std::vector<SlotTrace> window(trace.begin() + warmup, trace.end());
    const ResultRow row = summarize(window, scheme, "none", 0.0, cfg.seed);
    write_trace_csv((out / "trace.csv").string(), trace);
    write_convergence_csv((out / "convergence.csv").string(), trace);
    emit_results(out.string(), {row});

    std::cout << json{{"status", "ok"},
                      {"command", command},
                      {"scheme", row.scheme},
                      {"slots", T},
                      {"measured_from_slot", warmup + 1},
                      {"mean_sse", row.mean_sse},
                      {"feasibility_rate", row.feasibility_rate},
                      {"out", out.string()}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_sweep(const Common &c)
{
    if (c.config.empty())
        throw ConfigError("sweep needs --config with an [experiment] table");
    ExperimentSpec spec = load_experiment(c.config);
    apply_overrides(spec.base, c);
    if (c.seed)
        spec.seeds = {*c.seed};
    const fs::path out = prepare_out(c.out);
    const auto rows = run_sweep(spec, [](const ResultRow &r) {
        std::cerr << r.scheme << ' ' << r.sweep_var << '=' << r.sweep_value << " seed=" << r.seed
                  << " mean_sse=" << r.mean_sse << '\n';
    });
    emit_results(out.string(), rows);
    std::cout << json{{"status", "ok"}, {"command", "sweep"}, {"rows", rows.size()}, {"out", out.string()}}.dump()
              << '\n';
    return 0;
}

int cmd_fit(const std::string &samples, int tau, const std::string &out_dir)
{
    if (samples.empty())
        throw std::invalid_argument("fit-logistic needs --samples <csv>");
    if (tau < 1)
        throw std::invalid_argument("--tau must be >= 1");
    const auto data = read_samples_csv(samples);
    const LogisticFit fit = fit_logistic(data);
    validate(fit.params);
    const fs::path out = prepare_out(out_dir);
    const std::string path = (out / "logistic_row.csv").string();
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    f << "tau,a,b,c,d\n"
      << tau << ',' << csv::format(fit.params.a) << ',' << csv::format(fit.params.b) << ','
      << csv::format(fit.params.c) << ',' << csv::format(fit.params.d) << '\n';
    f.close();
    if (!f)
        throw IoError("write failed for '" + path + "'");
    std::cout << json{{"status", "ok"},
                      {"command", "fit-logistic"},
                      {"tau", tau},
                      {"a", fit.params.a},
                      {"b", fit.params.b},
                      {"c", fit.params.c},
                      {"d", fit.params.d},
                      {"residual_norm", fit.residual_norm},
                      {"iterations", fit.iterations},
                      {"out", path}}
                     .dump()
              << '\n';
    return 0;
}

int exit_code(const std::string &kind)
{
    if (kind == "usage")
        return 2;
    if (kind == "config")
        return 3;
    if (kind == "io")
        return 4;
    if (kind == "solver")
        return 5;
    if (kind == "fit")
        return 6;
    return 1;
}

int fail(const std::string &kind, const std::string &message)
{
    std::cerr << json{{"status", "error"}, {"kind", kind}, {"message", message}}.dump() << '\n';
    return exit_code(kind);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"jpsem: joint-processing semantic transmission simulator"};
    app.require_subcommand(1);

    Common run_opts, base_opts, sweep_opts;
    auto *run = app.add_subcommand("run", "run one scheme on one configuration");
    add_common(run, run_opts, true);
    auto *baseline = app.add_subcommand("baseline", "run the OMS, RMS or MMS baseline");
    add_common(baseline, base_opts, true);
    baseline->get_option("--scheme")->required();
    auto *sweep = app.add_subcommand("sweep", "run an experiment sweep");
    add_common(sweep, sweep_opts, false);

    std::string samples, fit_out = "out";
    int tau = 1;
    auto *fit = app.add_subcommand("fit-logistic", "fit one logistic table row to similarity samples");
    fit->add_option("--samples", samples, "CSV with header sinr_db,similarity");
    fit->add_option("--tau", tau, "row label written to the output")->capture_default_str();
    fit->add_option("--out", fit_out, "output directory")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail("usage", e.what());
    }

    try
    {
        if (*run)
            return cmd_run(run_opts, run_opts.scheme.empty() ? Scheme::Dsmra : parse_scheme(run_opts.scheme), "run");
        if (*baseline)
        {
            const Scheme s = parse_scheme(base_opts.scheme);
            if (s == Scheme::Dsmra)
                throw std::invalid_argument("baseline takes oms, rms or mms");
            return cmd_run(base_opts, s, "baseline");
        }
        if (*sweep)
            return cmd_sweep(sweep_opts);
        return cmd_fit(samples, tau, fit_out);
    }
    catch (const std::exception &e)
    {
        return fail(error_kind(e), e.what());
    }
}
