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
#include "jpsem/conic_solver.hpp"
#include "jpsem/errors.hpp"
#include "jpsem/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace jpsem
{

SinrTargets SinrTargets::from_linear(std::vector<double> values)
{
    SinrTargets t;
    t.db.reserve(values.size());
    for (double v : values)
        t.db.push_back(linear_to_db(v));
    t.linear = std::move(values);
    return t;
}

SinrTargets SinrTargets::from_db(std::vector<double> values)
{
    SinrTargets t;
    t.linear.reserve(values.size());
    for (double v : values)
        t.linear.push_back(db_to_linear(v));
    t.db = std::move(values);
    return t;
}

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// h_{.,k}^H w_{.,i} summed over BSs and antennas
cplx cross_term(const Beamformers &w, const LinkTensor &h, int k, int i)
{
    cplx acc{0.0, 0.0};
    for (int n = 0; n < h.num_bs(); ++n)
    {
        const auto hk = h.link(n, k);
        const auto wi = w.link(n, i);
        for (std::size_t m = 0; m < hk.size(); ++m)
            acc += std::conj(hk[m]) * wi[m];
    }
    return acc;
}

double link_norm(const LinkTensor &h, int n, int k)
{
    double s = 0.0;
    for (const auto &v : h.link(n, k))
        s += std::norm(v);
    return std::sqrt(s);
}

// Scales w so the most loaded BS sits exactly at its limit
void fit_to_power(Beamformers &w, const SystemConfig &cfg)
{
    const auto p = bs_power(w);
    double f = kInf;
    for (int n = 0; n < w.num_bs(); ++n)
        if (p[n] > 0.0)
            f = std::min(f, cfg.bs_power_mw(n) / p[n]);
    if (!std::isfinite(f))
        return;
    const double a = std::sqrt(f);
    for (auto &v : w.flat())
        v *= a;
}

double certified_margin(const Beamformers &w, const LinkTensor &h, std::span<const double> eta, double noise)
{
    const auto s = sinr_all(w, h, noise);
    double t = kInf;
    for (std::size_t k = 0; k < s.size(); ++k)
        t = std::min(t, s[k] / eta[k]);
    return t;
}

// Max-ratio transmission with an equal power split over users
Beamformers mrt(const LinkTensor &h, const SystemConfig &cfg)
{
    const int N = h.num_bs(), K = h.num_users(), M = h.num_antennas();
    Beamformers w(N, K, M);
    for (int n = 0; n < N; ++n)
        for (int k = 0; k < K; ++k)
        {
            const double nrm = link_norm(h, n, k);
            if (nrm <= 0.0)
                continue;
            const double a = std::sqrt(cfg.bs_power_mw(n) / K) / nrm;
            for (int m = 0; m < M; ++m)
                w(n, k, m) = a * h(n, k, m);
        }
    return w;
}

// Power-scaling subproblem for a fixed margin t, in units where the noise is 1
// and the largest BS budget is 1:
//   min s  s.t.  Re(h_k^H w_k) >= sqrt(t eta_k) ||(h_k^H w_i)_{i != k}, 1||,
//                ||w_n|| <= s sqrt(p_n).
// The optimal s^2 is the fraction of the budget needed to reach margin t.
class PowerScalingProgram
{
public:
    PowerScalingProgram(const LinkTensor &h, std::span<const double> eta, const SystemConfig &cfg)
        : K_(h.num_users()), M_(h.num_antennas()), eta_(eta.begin(), eta.end())
    {
        for (int n = 0; n < h.num_bs(); ++n)
            if (cfg.bs_power_mw(n) > 0.0)
            {
                active_.push_back(n);
                p_ref_ = std::max(p_ref_, cfg.bs_power_mw(n));
            }
        const int Na = static_cast<int>(active_.size());
        const double amp = std::sqrt(p_ref_ / cfg.noise_mw());
        nvar_ = 2 * Na * K_ * M_ + 1;
        const int s_col = nvar_ - 1;

        const int rows = 2 * K_ * K_ + Na * (1 + 2 * K_ * M_);
        prog_.c = Eigen::VectorXd::Zero(nvar_);
        prog_.c[s_col] = 1.0;
        prog_.G = Eigen::MatrixXd::Zero(rows, nvar_);
        prog_.h = Eigen::VectorXd::Zero(rows);
        signal_ = Eigen::MatrixXd::Zero(K_, nvar_);

        int r = 0;
        for (int k = 0; k < K_; ++k)
        {
            prog_.cones.push_back(2 * K_);
            // signal row, scaled per t in set_margin
            for (int a = 0; a < Na; ++a)
                for (int m = 0; m < M_; ++m)
                {
                    const cplx hv = h(active_[a], k, m) * amp;
                    signal_(k, re(a, k, m)) = -hv.real();
                    signal_(k, im(a, k, m)) = -hv.imag();
                }
            ++r;
            for (int i = 0; i < K_; ++i)
            {
                if (i == k)
                    continue;
                for (int a = 0; a < Na; ++a)
                    for (int m = 0; m < M_; ++m)
                    {
                        const cplx hv = h(active_[a], k, m) * amp;
                        prog_.G(r, re(a, i, m)) = -hv.real();
                        prog_.G(r, im(a, i, m)) = -hv.imag();
                        prog_.G(r + 1, re(a, i, m)) = hv.imag();
                        prog_.G(r + 1, im(a, i, m)) = -hv.real();
                    }
                r += 2;
            }
            prog_.h[r] = 1.0;
            ++r;
        }
        for (int a = 0; a < Na; ++a)
        {
            prog_.cones.push_back(1 + 2 * K_ * M_);
            prog_.G(r, s_col) = -std::sqrt(cfg.bs_power_mw(active_[a]) / p_ref_);
            ++r;
            for (int k = 0; k < K_; ++k)
                for (int m = 0; m < M_; ++m)
                {
                    prog_.G(r++, re(a, k, m)) = -1.0;
                    prog_.G(r++, im(a, k, m)) = -1.0;
                }
        }
    }

    bool has_power() const { return !active_.empty(); }

    conic::Result solve(double t, const conic::Settings &opt)
    {
        for (int k = 0; k < K_; ++k)
            prog_.G.row(2 * K_ * k) = signal_.row(k) / std::sqrt(t * eta_[k]);
        return conic::solve(prog_, opt);
    }

    // Beamformers in mW units from a solution vector
    Beamformers extract(const Eigen::VectorXd &x, int num_bs) const
    {
        Beamformers w(num_bs, K_, M_);
        const double a = std::sqrt(p_ref_);
        for (int b = 0; b < static_cast<int>(active_.size()); ++b)
            for (int k = 0; k < K_; ++k)
                for (int m = 0; m < M_; ++m)
                    w(active_[b], k, m) = cplx(x[re(b, k, m)], x[im(b, k, m)]) * a;
        return w;
    }

private:
    int re(int a, int k, int m) const { return 2 * ((k * static_cast<int>(active_.size()) + a) * M_ + m); }
    int im(int a, int k, int m) const { return re(a, k, m) + 1; }

    int K_, M_;
    std::vector<double> eta_;
    std::vector<int> active_;
    double p_ref_ = 0.0;
    int nvar_ = 0;
    conic::Problem prog_;
    Eigen::MatrixXd signal_;
};

} // namespace

double sinr(const Beamformers &w, const LinkTensor &h, int k, double noise_mw)
{
    const double signal = std::norm(cross_term(w, h, k, k));
    double interference = 0.0;
    for (int i = 0; i < h.num_users(); ++i)
        if (i != k)
            interference += std::norm(cross_term(w, h, k, i));
    return signal / (interference + noise_mw);
}

std::vector<double> sinr_all(const Beamformers &w, const LinkTensor &h, double noise_mw)
{
    std::vector<double> out(static_cast<std::size_t>(h.num_users()));
    for (int k = 0; k < h.num_users(); ++k)
        out[k] = sinr(w, h, k, noise_mw);
    return out;
}

std::vector<double> bs_power(const Beamformers &w)
{
    std::vector<double> p(static_cast<std::size_t>(w.num_bs()), 0.0);
    for (int n = 0; n < w.num_bs(); ++n)
        for (int k = 0; k < w.num_users(); ++k)
            for (const auto &v : w.link(n, k))
                p[n] += std::norm(v);
    return p;
}

std::optional<SinrTargets> effective_targets(const MappingDesign &mapping, const LogisticTable &table,
                                             double gamma_th_db, double xi_th, SinrScale scale)
{
    std::vector<double> db;
    db.reserve(mapping.tau.size());
    for (int tau : mapping.tau)
    {
        const auto x = min_sinr_for_similarity(table[tau], xi_th);
        if (!x)
            return std::nullopt;
        const double x_db = scale == SinrScale::Db ? *x : (std::isinf(*x) ? *x : linear_to_db(*x));
        db.push_back(std::max(gamma_th_db, x_db));
    }
    return SinrTargets::from_db(std::move(db));
}

MarginResult maxmin_margin_step(const LinkTensor &h, std::span<const double> eta_linear, const SystemConfig &cfg,
                                const Beamformers *warm, double stop_below)
{
    const int N = h.num_bs(), K = h.num_users(), M = h.num_antennas();
    if (static_cast<int>(eta_linear.size()) != K)
        throw std::invalid_argument("margin step: one target per user expected");
    for (double e : eta_linear)
        if (!(e > 0.0) || !std::isfinite(e))
            throw std::invalid_argument("margin step: targets must be positive and finite");

    const double noise = cfg.noise_mw();
    MarginResult out{Beamformers(N, K, M), 0.0, 0.0, 0};

    // single-user bound: full coherent power on user k with no interference
    double t_hi = kInf;
    for (int k = 0; k < K; ++k)
    {
        double amp = 0.0;
        for (int n = 0; n < N; ++n)
            amp += std::sqrt(cfg.bs_power_mw(n)) * link_norm(h, n, k);
        t_hi = std::min(t_hi, amp * amp / noise / eta_linear[k]);
    }
    if (!(t_hi > 0.0))
        return out;

    Beamformers w_lo = mrt(h, cfg);
    double t_lo = certified_margin(w_lo, h, eta_linear, noise);
    if (warm)
    {
        if (!warm->same_shape(h))
            throw std::invalid_argument("margin step: warm start has the wrong shape");
        Beamformers w = *warm;
        for (int n = 0; n < N; ++n)
            if (!(cfg.bs_power_mw(n) > 0.0))
                for (int k = 0; k < K; ++k)
                    for (auto &v : w.link(n, k))
                        v = 0.0;
        fit_to_power(w, cfg);
        const double t = certified_margin(w, h, eta_linear, noise);
        if (t >= t_lo)
        {
            t_lo = t;
            w_lo = std::move(w);
        }
    }
    t_hi = std::max(t_hi, t_lo);

    if (K == 1)
    {
        // maximum-ratio transmission is optimal for a single user
        out.w = std::move(w_lo);
        out.margin = t_lo;
        out.upper = t_hi;
        return out;
    }

    PowerScalingProgram prog(h, eta_linear, cfg);
    conic::Settings opt;
    opt.reltol = opt.abstol = std::min(1e-8, cfg.solver.duality_gap_tolerance * 10.0);
    const double tol = cfg.solver.bisection_tolerance;
    const double log_target = std::log1p(-0.25 * tol);

    struct Sample
    {
        double log_t, log_rho;
    };
    std::vector<Sample> samples;
    bool probed_warm = warm == nullptr;
    int failures = 0;
    double next = 0.0;

    for (int it = 0; it < 200; ++it)
    {
        if (t_hi - t_lo <= tol * t_hi || t_hi < stop_below)
            break;

        double t;
        if (next > 0.0)
            t = next;
        else if (!probed_warm)
            t = t_lo / (1.0 - 0.5 * tol); // cheap test of whether the warm point is already optimal
        else if (!samples.empty())
        {
            const Sample &a = samples.back();
            double slope = 1.0;
            if (samples.size() >= 2)
            {
                const Sample &b = samples[samples.size() - 2];
                if (std::abs(a.log_t - b.log_t) > 1e-14)
                    slope = std::clamp((a.log_rho - b.log_rho) / (a.log_t - b.log_t), 0.5, 100.0);
            }
            t = std::exp(a.log_t + (log_target - a.log_rho) / slope);
        }
        else
            t = t_lo > 0.0 ? std::sqrt(t_lo * t_hi) : 1e-2 * t_hi;
        probed_warm = true;
        next = 0.0;
        if (!(t > t_lo && t < t_hi))
            t = t_lo > 0.0 ? std::sqrt(t_lo * t_hi) : 0.5 * t_hi;

        const auto res = prog.solve(t, opt);
        ++out.conic_solves;
        if (res.status == conic::Status::PrimalInfeasible)
        {
            t_hi = t;
            continue;
        }
        if (res.status != conic::Status::Optimal)
        {
            if (++failures >= 3)
                throw SolverError(std::string("margin step: conic solver returned ") + conic::to_string(res.status) +
                                  " at t=" + std::to_string(t) + " with bracket [" + std::to_string(t_lo) + ", " +
                                  std::to_string(t_hi) + "]");
            next = t_lo > 0.0 ? std::sqrt(t_lo * t) : 0.5 * t;
            continue;
        }

        const double rho_dual = std::pow(std::max(res.dual_objective, 0.0), 2);
        if (rho_dual > 1.0)
            t_hi = std::min(t_hi, t);
        else if (rho_dual > 0.0)
            t_hi = std::min(t_hi, t / rho_dual);

        Beamformers w = prog.extract(res.x, N);
        fit_to_power(w, cfg);
        const double tc = certified_margin(w, h, eta_linear, noise);
        if (tc > t_lo)
        {
            t_lo = tc;
            w_lo = std::move(w);
        }
        t_hi = std::max(t_hi, t_lo);

        const double rho = res.primal_objective * res.primal_objective;
        if (rho > 0.0 && std::isfinite(rho))
            samples.push_back({std::log(t), std::log(rho)});
    }

    out.w = std::move(w_lo);
    out.margin = t_lo;
    out.upper = t_hi;
    return out;
}

SinrTargets eta_step(const Beamformers &w, const LinkTensor &h, double noise_mw)
{
    return SinrTargets::from_linear(sinr_all(w, h, noise_mw));
}

double surrogate_objective(const MappingDesign &mapping, const SinrTargets &eta, const LogisticTable &table,
                           const SystemConfig &cfg)
{
    double r = 0.0;
    for (int k = 0; k < mapping.size(); ++k)
    {
        const int tau = mapping.tau[k];
        const double x = cfg.sinr_scale == SinrScale::Db ? eta.db[k] : eta.linear[k];
        r += sse_user(cfg.info(k), cfg.words(k), tau, similarity(table[tau], x));
    }
    return r;
}

double feasibility_margin(const MappingDesign &mapping, const ChannelState &channel, const LogisticTable &table,
                          const SystemConfig &cfg)
{
    validate(mapping, table.max_symbols(), channel.h.num_users());
    const auto req = effective_targets(mapping, table, cfg.sinr_threshold_db, cfg.similarity_threshold, cfg.sinr_scale);
    if (!req)
        return 0.0;
    return maxmin_margin_step(channel.h, req->linear, cfg, nullptr, 0.0).margin;
}

BeamformingOutcome solve_beamforming(const MappingDesign &mapping, const ChannelState &channel,
                                     const LogisticTable &table, const SystemConfig &cfg)
{
    const LinkTensor &h = channel.h;
    validate(mapping, table.max_symbols(), h.num_users());

    BeamformingOutcome out;
    out.w = Beamformers(h.num_bs(), h.num_users(), h.num_antennas());
    const auto req = effective_targets(mapping, table, cfg.sinr_threshold_db, cfg.similarity_threshold, cfg.sinr_scale);
    if (!req)
    {
        out.eta = eta_step(out.w, h, cfg.noise_mw());
        return out;
    }

    const double noise = cfg.noise_mw();
    MarginResult step = maxmin_margin_step(h, req->linear, cfg, nullptr, 1.0);
    out.iterations = 1;
    if (step.margin < 1.0)
    {
        out.w = std::move(step.w);
        out.eta = eta_step(out.w, h, noise);
        out.margin_trace.push_back({step.margin, 0.0});
        return out;
    }

    out.w = std::move(step.w);
    out.eta = eta_step(out.w, h, noise);
    double objective = surrogate_objective(mapping, out.eta, table, cfg);
    out.margin_trace.push_back({step.margin, objective});

    while (out.iterations < cfg.solver.max_iterations)
    {
        step = maxmin_margin_step(h, out.eta.linear, cfg, &out.w, 0.0);
        ++out.iterations;
        SinrTargets eta = eta_step(step.w, h, noise);
        const double next = surrogate_objective(mapping, eta, table, cfg);
        out.margin_trace.push_back({step.margin, next});
        const double change = next - objective;
        out.w = std::move(step.w);
        out.eta = std::move(eta);
        objective = next;
        if (std::abs(change) < cfg.solver.objective_tolerance)
            break;
    }

    out.feasible = true;
    out.sse_value = objective;
    return out;
}

void write_margin_trace_csv(const std::string &path, const BeamformingOutcome &outcome)
{
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    f << "iteration,margin,objective\n" << std::setprecision(17);
    for (std::size_t j = 0; j < outcome.margin_trace.size(); ++j)
        f << j + 1 << ',' << outcome.margin_trace[j].margin << ',' << outcome.margin_trace[j].objective << '\n';
    if (!f)
        throw IoError("write failed for '" + path + "'");
}

} // namespace jpsem
