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

#include "jpsem/semantics.hpp"
#include "jpsem/csv.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/units.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace jpsem
{

void validate(const LogisticParams &p)
{
    if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.d))
        throw ConfigError("logistic parameters must be finite");
    if (!(p.b > 0.0) || !(p.c > 0.0))
        throw ConfigError("logistic parameters need b > 0 and c > 0");
    if (p.a < 0.0 || p.a + p.b > 1.0 + 1e-12)
        throw ConfigError("logistic parameters need 0 <= a and a + b <= 1");
}

void validate(const LogisticTable &table)
{
    if (table.params.empty())
        throw ConfigError("logistic table is empty");
    for (const auto &p : table.params)
        validate(p);
    // similarity must not decrease with tau at any SINR; checked on a dense grid
    for (double x = -60.0; x <= 100.0; x += 0.25)
        for (int tau = 2; tau <= table.max_symbols(); ++tau)
            if (similarity(table[tau], x) < similarity(table[tau - 1], x) - 1e-12)
                throw ConfigError("logistic table: similarity decreases from tau=" + std::to_string(tau - 1) +
                                  " to tau=" + std::to_string(tau));
}

void validate(const MappingDesign &mapping, int max_symbols, int num_users)
{
    if (mapping.size() != num_users)
        throw std::invalid_argument("mapping design length must equal the number of users");
    for (int t : mapping.tau)
        if (t < 1 || t > max_symbols)
            throw std::invalid_argument("mapping entries must lie in 1..Gamma");
}

double similarity(const LogisticParams &p, double sinr)
{
    return p.a + p.b / (1.0 + std::exp(-p.c * (sinr + p.d)));
}

std::optional<double> min_sinr_for_similarity(const LogisticParams &p, double xi_th)
{
    if (xi_th >= p.a + p.b)
        return std::nullopt;
    if (xi_th <= p.a)
        return -std::numeric_limits<double>::infinity();
    return -p.d - std::log(p.b / (xi_th - p.a) - 1.0) / p.c;
}

namespace
{

struct Residuals
{
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    double cost;
};

Residuals evaluate(const Eigen::Vector4d &p, const Eigen::VectorXd &x, const Eigen::VectorXd &y)
{
    Residuals out{Eigen::VectorXd(x.size()), Eigen::MatrixXd(x.size(), 4), 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i)
    {
        const double u = x[i] + p[3];
        const double s = 1.0 / (1.0 + std::exp(-p[2] * u));
        const double ds = s * (1.0 - s);
        out.r[i] = p[0] + p[1] * s - y[i];
        out.J(i, 0) = 1.0;
        out.J(i, 1) = s;
        out.J(i, 2) = p[1] * ds * u;
        out.J(i, 3) = p[1] * ds * p[2];
    }
    out.cost = out.r.squaredNorm();
    return out;
}

LogisticFit to_fit(const Eigen::Vector4d &p, double cost, int it)
{
    return {{p[0], p[1], p[2], p[3]}, std::sqrt(cost), it};
}

} // namespace

LogisticFit fit_logistic(std::span<const SimilaritySample> samples)
{
    std::vector<SimilaritySample> s(samples.begin(), samples.end());
    for (const auto &e : s)
        if (!std::isfinite(e.sinr) || !std::isfinite(e.similarity))
            throw std::invalid_argument("fit samples must be finite");
    std::sort(s.begin(), s.end(), [](const auto &l, const auto &r) { return l.sinr < r.sinr; });
    int distinct = s.empty() ? 0 : 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        distinct += s[i].sinr != s[i - 1].sinr;
    if (distinct < 4)
        throw std::invalid_argument("fit needs at least 4 samples with distinct SINRs");

    const Eigen::Index n = static_cast<Eigen::Index>(s.size());
    Eigen::VectorXd x(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        x[i] = s[i].sinr;
        y[i] = s[i].similarity;
    }

    const double lo = y.minCoeff();
    const double hi = y.maxCoeff();
    const double span = hi - lo;
    if (span <= 1e-12 * std::max(1.0, std::abs(hi)))
        throw FitError("degenerate fit: similarity samples are flat", {{lo, 0.0, 1.0, 0.0}, std::sqrt((y.array() - lo).square().sum()), 0});

    // midpoint crossing and slope there
    const double mid = lo + 0.5 * span;
    double x_mid = 0.5 * (x[0] + x[n - 1]);
    double slope = 0.0;
    for (Eigen::Index i = 1; i < n; ++i)
        if ((y[i - 1] - mid) * (y[i] - mid) <= 0.0 && x[i] > x[i - 1] && y[i] != y[i - 1])
        {
            x_mid = x[i - 1] + (mid - y[i - 1]) * (x[i] - x[i - 1]) / (y[i] - y[i - 1]);
            slope = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            break;
        }
    double c0 = 4.0 * slope / span;
    if (!(c0 > 0.0) || !std::isfinite(c0))
        c0 = 4.0 / (x[n - 1] - x[0]);

    Eigen::Vector4d p(lo, span, c0, -x_mid);
    Residuals cur = evaluate(p, x, y);
    double lambda = 1e-3;
    constexpr int max_iter = 500;
    int it = 0;
    for (; it < max_iter; ++it)
    {
        const Eigen::Matrix4d JtJ = cur.J.transpose() * cur.J;
        const Eigen::Vector4d g = cur.J.transpose() * cur.r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-15 || cur.cost < 1e-30)
            break;

        bool accepted = false;
        Eigen::Vector4d step = Eigen::Vector4d::Zero();
        for (int tries = 0; tries < 60 && !accepted; ++tries)
        {
            Eigen::Matrix4d A = JtJ;
            for (int j = 0; j < 4; ++j)
                A(j, j) += lambda * std::max(JtJ(j, j), 1e-12);
            step = A.ldlt().solve(-g);
            const Eigen::Vector4d trial = p + step;
            if (trial[1] > 0.0 && trial[2] > 0.0 && step.allFinite())
            {
                Residuals next = evaluate(trial, x, y);
                if (next.cost < cur.cost)
                {
                    p = trial;
                    cur = std::move(next);
                    lambda = std::max(lambda / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if (!accepted || step.norm() <= 1e-13 * (p.norm() + 1e-13))
            break;
    }

    LogisticFit fit = to_fit(p, cur.cost, it);
    if (it >= max_iter || !p.allFinite())
        throw FitError("logistic fit did not converge", fit);
    return fit;
}

double sse_user(double info_suts, double words, int tau, double xi)
{
    return info_suts / (tau * words) * xi;
}

double to_curve_scale(double sinr_linear, SinrScale scale)
{
    return scale == SinrScale::Db ? linear_to_db(sinr_linear) : sinr_linear;
}

double from_curve_scale(double x, SinrScale scale)
{
    if (scale == SinrScale::Db)
        return db_to_linear(x);
    return std::max(x, 0.0);
}

double total_sse(const MappingDesign &mapping, std::span<const double> sinr_db, const LogisticTable &table,
                 const SystemConfig &cfg)
{
    if (static_cast<std::size_t>(mapping.size()) != sinr_db.size())
        throw std::invalid_argument("total_sse: mapping and SINR lengths differ");
    double sum = 0.0;
    for (int k = 0; k < mapping.size(); ++k)
    {
        const int tau = mapping.tau[k];
        const double x = cfg.sinr_scale == SinrScale::Db ? sinr_db[k] : db_to_linear(sinr_db[k]);
        sum += sse_user(cfg.info(k), cfg.words(k), tau, similarity(table[tau], x));
    }
    return sum;
}

LogisticTable default_table(int max_symbols)
{
    LogisticTable t;
    for (int tau = 1; tau <= max_symbols; ++tau)
        t.params.push_back({0.0, 1.0 - std::exp(-0.4 * tau), 0.3, tau - 12.0});
    return t;
}

LogisticTable read_table_csv(const std::string &path)
{
    const auto rows = csv::read_file(path, {"tau", "a", "b", "c", "d"});
    LogisticTable t;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        const auto &r = rows[i];
        const int tau = static_cast<int>(csv::to_double(r[0]));
        if (tau != static_cast<int>(i) + 1)
            throw ConfigError("logistic table rows must list tau = 1, 2, ... in order");
        t.params.push_back({csv::to_double(r[1]), csv::to_double(r[2]), csv::to_double(r[3]), csv::to_double(r[4])});
    }
    validate(t);
    return t;
}

void write_table_csv(const std::string &path, const LogisticTable &table)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << "tau,a,b,c,d\n" << std::setprecision(17);
    for (int tau = 1; tau <= table.max_symbols(); ++tau)
    {
        const auto &p = table[tau];
        out << tau << ',' << p.a << ',' << p.b << ',' << p.c << ',' << p.d << '\n';
    }
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

LogisticTable table_for(const SystemConfig &cfg)
{
    LogisticTable t = cfg.table_path.empty() ? default_table(cfg.max_symbols_per_word) : read_table_csv(cfg.table_path);
    if (t.max_symbols() != cfg.max_symbols_per_word)
        throw ConfigError("logistic table has " + std::to_string(t.max_symbols()) + " rows but Gamma is " +
                          std::to_string(cfg.max_symbols_per_word));
    return t;
}

std::vector<SimilaritySample> read_samples_csv(const std::string &path)
{
    std::vector<SimilaritySample> out;
    for (const auto &r : csv::read_file(path, {"sinr_db", "similarity"}))
        out.push_back({csv::to_double(r[0]), csv::to_double(r[1])});
    return out;
}

} // namespace jpsem
