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

#ifndef JPSEM_SEMANTICS_HPP
#define JPSEM_SEMANTICS_HPP

#include "jpsem/config.hpp"

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jpsem
{

// Generalized logistic similarity curve xi(x) = a + b / (1 + exp(-c (x + d)))
struct LogisticParams
{
    double a = 0.0;
    double b = 1.0;
    double c = 1.0;
    double d = 0.0;

    bool operator==(const LogisticParams &) const = default;
};

// Row tau-1 holds the curve for tau semantic symbols per word
struct LogisticTable
{
    std::vector<LogisticParams> params;

    int max_symbols() const { return static_cast<int>(params.size()); }
    const LogisticParams &operator[](int tau) const { return params.at(static_cast<std::size_t>(tau - 1)); }
};

// Semantic symbols per word for every user, each in 1..Gamma
struct MappingDesign
{
    std::vector<int> tau;

    int size() const { return static_cast<int>(tau.size()); }
    auto operator<=>(const MappingDesign &) const = default;
};

struct SimilaritySample
{
    double sinr; // in the curve's SINR scale (dB by default)
    double similarity;
};

struct LogisticFit
{
    LogisticParams params;
    double residual_norm = 0.0; // l2 norm of the residual vector
    int iterations = 0;
};

// Least-squares fit that did not produce a usable curve. Carries the best iterate.
class FitError : public std::runtime_error
{
public:
    FitError(const std::string &msg, LogisticFit best) : std::runtime_error(msg), best_(best) {}
    const LogisticFit &best() const { return best_; }

private:
    LogisticFit best_;
};

void validate(const LogisticParams &p);          // b > 0, c > 0, a >= 0, a + b <= 1
void validate(const LogisticTable &table);        // rows plus monotonicity in tau on a grid
void validate(const MappingDesign &mapping, int max_symbols, int num_users);

double similarity(const LogisticParams &p, double sinr);

// Smallest SINR with similarity >= xi_th. std::nullopt when xi_th >= a + b,
// -infinity when xi_th <= a (any SINR works).
std::optional<double> min_sinr_for_similarity(const LogisticParams &p, double xi_th);

// Levenberg-Marquardt fit of the four curve parameters. Needs >= 4 distinct SINRs.
// Initialization: a = min y, b = max y - min y, d = -(midpoint crossing),
// c from the finite-difference slope at the crossing.
LogisticFit fit_logistic(std::span<const SimilaritySample> samples);

// Semantic spectral efficiency of one user, suts/s/Hz
double sse_user(double info_suts, double words, int tau, double xi);

// Converts between linear SINR and the scale the curves are parameterized in
double to_curve_scale(double sinr_linear, SinrScale scale);
double from_curve_scale(double x, SinrScale scale);

// Sum of per-user SSE with similarity evaluated at each user's SINR (dB)
double total_sse(const MappingDesign &mapping, std::span<const double> sinr_db, const LogisticTable &table,
                 const SystemConfig &cfg);

// Built-in synthetic table: a = 0, b = 1 - exp(-0.4 tau), c = 0.3, d = tau - 12
LogisticTable default_table(int max_symbols);

// CSV with header "tau,a,b,c,d", one row per tau in 1..Gamma
LogisticTable read_table_csv(const std::string &path);
void write_table_csv(const std::string &path, const LogisticTable &table);

// Table named by cfg.table_path, or the built-in one. Row count must equal Gamma.
LogisticTable table_for(const SystemConfig &cfg);

std::vector<SimilaritySample> read_samples_csv(const std::string &path);

} // namespace jpsem

#endif
