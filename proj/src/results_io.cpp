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

#include "jpsem/results_io.hpp"
#include "jpsem/csv.hpp"
#include "jpsem/errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

namespace jpsem
{

namespace
{

using csv::format;

std::ofstream open_out(const std::string &path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    return f;
}

void close_out(std::ofstream &f, const std::string &path)
{
    f.close();
    if (!f)
        throw IoError("write failed for '" + path + "'");
}

} // namespace

void write_results_csv(const std::string &path, const std::vector<ResultRow> &rows)
{
    auto f = open_out(path);
    f << kResultsHeader << '\n';
    for (const auto &r : rows)
        f << r.scheme << ',' << r.sweep_var << ',' << format(r.sweep_value) << ',' << r.seed << ','
          << format(r.mean_sse) << ',' << format(r.std_sse) << ',' << format(r.mean_solve_ms) << ','
          << format(r.feasibility_rate) << '\n';
    close_out(f, path);
}

std::vector<ResultRow> read_results_csv(const std::string &path)
{
    std::vector<ResultRow> out;
    for (const auto &r : csv::read_file(path, csv::split(kResultsHeader)))
    {
        ResultRow row;
        row.scheme = r[0];
        row.sweep_var = r[1];
        row.sweep_value = csv::to_double(r[2]);
        try
        {
            row.seed = std::stoull(r[3]);
        }
        catch (const std::exception &)
        {
            throw IoError("invalid seed field '" + r[3] + "' in '" + path + "'");
        }
        row.mean_sse = csv::to_double(r[4]);
        row.std_sse = csv::to_double(r[5]);
        row.mean_solve_ms = csv::to_double(r[6]);
        row.feasibility_rate = csv::to_double(r[7]);
        out.push_back(std::move(row));
    }
    return out;
}

void write_plot_data(const std::string &path, const std::vector<ResultRow> &rows)
{
    // (scheme, var, value) -> per-seed means; std::map keeps the output order canonical
    std::map<std::tuple<std::string, std::string, double>, std::vector<double>> series;
    for (const auto &r : rows)
        series[{r.scheme, r.sweep_var, r.sweep_value}].push_back(r.mean_sse);

    auto f = open_out(path);
    f << "scheme,sweep_var,sweep_value,mean_sse,seed_std,num_seeds\n";
    for (const auto &[key, v] : series)
    {
        double mean = 0.0;
        for (double x : v)
            mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        f << std::get<0>(key) << ',' << std::get<1>(key) << ',' << format(std::get<2>(key)) << ',' << format(mean)
          << ',' << format(std::sqrt(ss / static_cast<double>(v.size()))) << ',' << v.size() << '\n';
    }
    close_out(f, path);
}

void write_trace_csv(const std::string &path, const std::vector<SlotTrace> &trace)
{
    const std::size_t K = trace.empty() ? 0 : trace.front().mapping.tau.size();
    auto f = open_out(path);
    f << "slot";
    for (std::size_t k = 1; k <= K; ++k)
        f << ",tau_" << k;
    f << ",sse,loss,feasible\n";
    for (const auto &s : trace)
    {
        f << s.slot;
        for (int t : s.mapping.tau)
            f << ',' << t;
        f << ',' << format(s.sse) << ',' << (s.loss ? format(*s.loss) : "nan") << ',' << (s.feasible ? 1 : 0)
          << '\n';
    }
    close_out(f, path);
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window)
{
    if (window == 0)
        throw std::invalid_argument("moving average window must be positive");
    std::vector<double> out;
    if (values.size() < window)
        return out;
    out.reserve(values.size() - window + 1);
    // each window summed afresh: exact enough and free of drift
    for (std::size_t i = 0; i + window <= values.size(); ++i)
    {
        double s = 0.0;
        for (std::size_t j = i; j < i + window; ++j)
            s += values[j];
        out.push_back(s / static_cast<double>(window));
    }
    return out;
}

std::vector<double> carried_loss(const std::vector<SlotTrace> &trace)
{
    std::vector<double> out;
    double first = std::numeric_limits<double>::quiet_NaN();
    for (const auto &s : trace)
        if (s.loss)
        {
            first = *s.loss;
            break;
        }
    if (std::isnan(first))
        return out;
    double cur = first;
    out.reserve(trace.size());
    for (const auto &s : trace)
    {
        if (s.loss)
            cur = *s.loss;
        out.push_back(cur);
    }
    return out;
}

void write_convergence_csv(const std::string &path, const std::vector<SlotTrace> &trace, std::size_t window)
{
    std::vector<double> sse;
    sse.reserve(trace.size());
    for (const auto &s : trace)
        sse.push_back(s.sse);
    const auto sse_ma = moving_average(sse, window);
    const auto loss = carried_loss(trace);
    const auto loss_ma = moving_average(loss, window);

    auto f = open_out(path);
    f << "slot,loss_ma,sse_ma\n";
    for (std::size_t i = 0; i < sse_ma.size(); ++i)
        f << trace[i + window - 1].slot << ',' << (loss_ma.empty() ? "nan" : format(loss_ma[i])) << ','
          << format(sse_ma[i]) << '\n';
    close_out(f, path);
}

void emit_results(const std::string &dir, const std::vector<ResultRow> &rows)
{
    if (rows.empty())
        throw std::invalid_argument("emit_results: no rows");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create '" + dir + "': " + ec.message());
    const std::filesystem::path base(dir);
    write_results_csv((base / "results.csv").string(), rows);
    write_plot_data((base / "plot_data.csv").string(), rows);
}

} // namespace jpsem
