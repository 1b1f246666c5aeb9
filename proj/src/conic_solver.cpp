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

#include "jpsem/conic_solver.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jpsem::conic
{

const char *to_string(Status s)
{
    switch (s)
    {
    case Status::Optimal: return "optimal";
    case Status::PrimalInfeasible: return "primal_infeasible";
    case Status::DualInfeasible: return "dual_infeasible";
    case Status::IterationLimit: return "iteration_limit";
    case Status::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

namespace
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Layout
{
    std::vector<Index> off;
    std::vector<Index> dim;
};

// u0^2 - ||u1||^2, factored to limit cancellation
double jnorm2(const VectorXd &u, Index o, Index m)
{
    const double n1 = m > 1 ? u.segment(o + 1, m - 1).norm() : 0.0;
    return (u[o] - n1) * (u[o] + n1);
}

// Nesterov-Todd scaling W = eta * Wbar(wbar), one block per cone
struct Scaling
{
    std::vector<double> eta;
    VectorXd w;

    bool update(const Layout &L, const VectorXd &s, const VectorXd &z)
    {
        eta.resize(L.off.size());
        w.resize(s.size());
        for (std::size_t c = 0; c < L.off.size(); ++c)
        {
            const Index o = L.off[c], m = L.dim[c];
            const double sj = jnorm2(s, o, m), zj = jnorm2(z, o, m);
            if (!(sj > 0.0) || !(zj > 0.0) || s[o] <= 0.0 || z[o] <= 0.0)
                return false;
            const double sn = std::sqrt(sj), zn = std::sqrt(zj);
            eta[c] = std::pow(sj / zj, 0.25);
            if (m == 1)
            {
                w[o] = 1.0;
                continue;
            }
            const auto sb1 = s.segment(o + 1, m - 1) / sn;
            const auto zb1 = z.segment(o + 1, m - 1) / zn;
            const double sb0 = s[o] / sn, zb0 = z[o] / zn;
            const double dot = sb0 * zb0 + sb1.dot(zb1);
            const double gamma = std::sqrt(0.5 * (1.0 + dot));
            w.segment(o + 1, m - 1) = (sb1 - zb1) / (2.0 * gamma);
            // enforce w0^2 - ||w1||^2 = 1 exactly
            w[o] = std::sqrt(1.0 + w.segment(o + 1, m - 1).squaredNorm());
        }
        return true;
    }

    // out = W u (inverse=false) or W^-1 u (inverse=true)
    void apply(const Layout &L, const VectorXd &u, VectorXd &out, bool inverse) const
    {
        out.resize(u.size());
        for (std::size_t c = 0; c < L.off.size(); ++c)
        {
            const Index o = L.off[c], m = L.dim[c];
            const double e = inverse ? 1.0 / eta[c] : eta[c];
            if (m == 1)
            {
                out[o] = e * u[o];
                continue;
            }
            const double w0 = w[o];
            const auto w1 = w.segment(o + 1, m - 1);
            const double u0 = u[o];
            const double d = w1.dot(u.segment(o + 1, m - 1));
            const double sgn = inverse ? -1.0 : 1.0;
            out[o] = e * (w0 * u0 + sgn * d);
            out.segment(o + 1, m - 1) = e * (u.segment(o + 1, m - 1) + (sgn * u0 + d / (1.0 + w0)) * w1);
        }
    }
};

// Jordan product u o v
VectorXd jprod(const Layout &L, const VectorXd &u, const VectorXd &v)
{
    VectorXd out(u.size());
    for (std::size_t c = 0; c < L.off.size(); ++c)
    {
        const Index o = L.off[c], m = L.dim[c];
        out[o] = u.segment(o, m).dot(v.segment(o, m));
        if (m > 1)
            out.segment(o + 1, m - 1) = u[o] * v.segment(o + 1, m - 1) + v[o] * u.segment(o + 1, m - 1);
    }
    return out;
}

// Solves lambda o x = d for x
VectorXd jdiv(const Layout &L, const VectorXd &lambda, const VectorXd &d)
{
    VectorXd out(d.size());
    for (std::size_t c = 0; c < L.off.size(); ++c)
    {
        const Index o = L.off[c], m = L.dim[c];
        if (m == 1)
        {
            out[o] = d[o] / lambda[o];
            continue;
        }
        const double l0 = lambda[o];
        const auto l1 = lambda.segment(o + 1, m - 1);
        const double x0 = (l0 * d[o] - l1.dot(d.segment(o + 1, m - 1))) / jnorm2(lambda, o, m);
        out[o] = x0;
        out.segment(o + 1, m - 1) = (d.segment(o + 1, m - 1) - x0 * l1) / l0;
    }
    return out;
}

// Largest alpha with u + alpha v in K, for u in the interior (kInf if unbounded)
double max_step(const Layout &L, const VectorXd &u, const VectorXd &v)
{
    double alpha = kInf;
    for (std::size_t c = 0; c < L.off.size(); ++c)
    {
        const Index o = L.off[c], m = L.dim[c];
        if (m == 1)
        {
            if (v[o] < 0.0)
                alpha = std::min(alpha, -u[o] / v[o]);
            continue;
        }
        const double A = jnorm2(v, o, m);
        if (A > 0.0 && v[o] > 0.0)
            continue;
        const double B = u[o] * v[o] - u.segment(o + 1, m - 1).dot(v.segment(o + 1, m - 1));
        const double C = std::max(jnorm2(u, o, m), 0.0);
        const double root = std::sqrt(std::max(B * B - A * C, 0.0));
        const double den = root - B;
        if (den > 0.0)
            alpha = std::min(alpha, C / den);
    }
    return alpha;
}

// Moves u into the interior: u + (1 + max violation) e when needed
void shift_into_cone(const Layout &L, VectorXd &u)
{
    double viol = -kInf;
    for (std::size_t c = 0; c < L.off.size(); ++c)
    {
        const Index o = L.off[c], m = L.dim[c];
        const double n1 = m > 1 ? u.segment(o + 1, m - 1).norm() : 0.0;
        viol = std::max(viol, n1 - u[o]);
    }
    if (viol >= 0.0)
        for (std::size_t c = 0; c < L.off.size(); ++c)
            u[L.off[c]] += 1.0 + viol;
}

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Reduced KKT matrix G' W^-2 G, assembled per cone from
// W^-2 = eta^-2 (2 (Jw)(Jw)' - J): a rank-one term per cone plus the fixed
// matrix G_c' J G_c, both restricted to the columns the cone touches
class KktSolver
{
public:
    KktSolver(const Layout &L, const MatrixXd &G, const SparseRows &Gs) : G_(Gs)
    {
        blocks_.resize(L.off.size());
        for (std::size_t c = 0; c < L.off.size(); ++c)
        {
            const Index o = L.off[c], m = L.dim[c];
            Block &B = blocks_[c];
            for (Index j = 0; j < G.cols(); ++j)
                if (G.col(j).segment(o, m).any())
                    B.cols.push_back(j);
            for (std::size_t j = 0; j < B.cols.size(); ++j)
                if (j == 0 || B.cols[j] != B.cols[j - 1] + 1)
                    B.runs.push_back({B.cols[j], static_cast<Index>(j), 1});
                else
                    ++B.runs.back().len;
            B.sub.resize(m, static_cast<Index>(B.cols.size()));
            for (std::size_t j = 0; j < B.cols.size(); ++j)
                B.sub.col(static_cast<Index>(j)) = G.col(B.cols[j]).segment(o, m);
            B.fixed = B.sub.row(0).transpose() * B.sub.row(0);
            if (m > 1)
                B.fixed.noalias() -= B.sub.bottomRows(m - 1).transpose() * B.sub.bottomRows(m - 1);
        }
        H_.resize(G.cols(), G.cols());
    }

    bool factor(const Layout &L, const Scaling &W)
    {
        H_.setZero();
        for (std::size_t c = 0; c < L.off.size(); ++c)
        {
            const Index o = L.off[c], m = L.dim[c];
            Block &B = blocks_[c];
            const double e2 = 1.0 / (W.eta[c] * W.eta[c]);
            B.v = W.w[o] * B.sub.row(0).transpose();
            if (m > 1)
                B.v.noalias() -= B.sub.bottomRows(m - 1).transpose() * W.w.segment(o + 1, m - 1);
            for (const Run &rj : B.runs)
                for (const Run &ri : B.runs)
                {
                    if (ri.col + ri.len <= rj.col)
                        continue; // strictly above the diagonal; LLT reads the lower half
                    auto blk = H_.block(ri.col, rj.col, ri.len, rj.len);
                    blk.noalias() += (2.0 * e2) * B.v.segment(ri.pos, ri.len) * B.v.segment(rj.pos, rj.len).transpose();
                    blk -= e2 * B.fixed.block(ri.pos, rj.pos, ri.len, rj.len);
                }
        }
        H_.diagonal().array() += 1e-13 * std::max(1.0, H_.diagonal().maxCoeff());
        llt_.compute(H_);
        return llt_.info() == Eigen::Success;
    }

    // Solves G' dz = a, G dx - W^2 dz = b, refining on the unreduced pair
    // (at most twice) while the residual is above roundoff level; this
    // recovers accuracy lost when W is ill-conditioned
    void solve(const Layout &L, const Scaling &W, const VectorXd &a, const VectorXd &b, VectorXd &dx,
               VectorXd &dz)
    {
        reduced(L, W, a, b, dx, dz);
        const double scale = 1e-13 * (1.0 + a.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
        for (int it = 0; it < 2; ++it)
        {
            W.apply(L, dz, t1_, false);
            W.apply(L, t1_, t2_, false);
            ra_.noalias() = a - G_.transpose() * dz;
            rb_ = b + t2_;
            rb_.noalias() -= G_ * dx;
            if (std::max(ra_.lpNorm<Eigen::Infinity>(), rb_.lpNorm<Eigen::Infinity>()) <= scale)
                break;
            reduced(L, W, ra_, rb_, cx_, cz_);
            dx += cx_;
            dz += cz_;
        }
    }

private:
    void reduced(const Layout &L, const Scaling &W, const VectorXd &a, const VectorXd &b, VectorXd &dx,
                 VectorXd &dz)
    {
        W.apply(L, b, r_, true);
        W.apply(L, r_, wb_, true);
        rhs_ = a;
        rhs_.noalias() += G_.transpose() * wb_;
        dx = llt_.solve(rhs_);
        r_ = -b;
        r_.noalias() += G_ * dx;
        W.apply(L, r_, wb_, true);
        W.apply(L, wb_, dz, true);
    }

    // contiguous stretch of H columns within a cone's support
    struct Run
    {
        Index col, pos, len;
    };
    struct Block
    {
        std::vector<Index> cols;
        std::vector<Run> runs;
        MatrixXd sub, fixed;
        VectorXd v;
    };

    const SparseRows &G_;
    std::vector<Block> blocks_;
    MatrixXd H_;
    Eigen::LLT<MatrixXd> llt_;
    VectorXd t1_, t2_, ra_, rb_, cx_, cz_, wb_, rhs_, r_;
};

} // namespace

Result solve(const Problem &P, const Settings &opt)
{
    const Index n = P.c.size();
    const Index m = P.h.size();
    if (P.G.rows() != m || P.G.cols() != n)
        throw std::invalid_argument("conic::solve: G has wrong shape");

    Layout L;
    Index total = 0;
    for (int d : P.cones)
    {
        if (d < 1)
            throw std::invalid_argument("conic::solve: cone sizes must be positive");
        L.off.push_back(total);
        L.dim.push_back(d);
        total += d;
    }
    if (total != m)
        throw std::invalid_argument("conic::solve: cone sizes do not match G rows");
    const double degree = static_cast<double>(P.cones.size());

    Result res;
    const SparseRows Gs = P.G.sparseView();
    KktSolver kkt(L, P.G, Gs);
    Scaling W;

    // Least-squares start with W = I, shifted into the cone
    W.eta.assign(L.off.size(), 1.0);
    W.w = VectorXd::Zero(m);
    for (Index o : L.off)
        W.w[o] = 1.0;
    if (!kkt.factor(L, W))
    {
        res.status = Status::NumericalFailure;
        return res;
    }
    VectorXd x, z, s, dx, dz;
    kkt.solve(L, W, VectorXd::Zero(n), P.h, x, s);
    s = -s; // s = h - G x
    kkt.solve(L, W, -P.c, VectorXd::Zero(m), dx, z);
    shift_into_cone(L, s);
    shift_into_cone(L, z);
    double tau = 1.0, kappa = 1.0;

    const double hnorm = std::max(1.0, P.h.norm());
    const double cnorm = std::max(1.0, P.c.norm());

    VectorXd e = VectorXd::Zero(m);
    for (Index o : L.off)
        e[o] = 1.0;

    auto finish = [&](Status st, int it) {
        res.status = st;
        res.iterations = it;
        if (st == Status::PrimalInfeasible)
        {
            const double hz = -P.h.dot(z);
            res.x = VectorXd::Zero(n);
            res.s = VectorXd::Zero(m);
            res.z = z / hz;
            res.primal_objective = kInf;
            res.dual_objective = kInf;
        }
        else if (st == Status::DualInfeasible)
        {
            const double cx = -P.c.dot(x);
            res.x = x / cx;
            res.s = s / cx;
            res.z = VectorXd::Zero(m);
            res.primal_objective = -kInf;
            res.dual_objective = -kInf;
        }
        else
        {
            res.x = x / tau;
            res.s = s / tau;
            res.z = z / tau;
            res.primal_objective = P.c.dot(res.x);
            res.dual_objective = -P.h.dot(res.z);
        }
        return res;
    };

    struct Snapshot
    {
        double score = kInf;
        VectorXd x, s, z;
        double tau = 1.0;
    } best;
    // Returns the best iterate seen if it meets the reduced tolerance
    auto fallback = [&](Status st, int it) {
        if (best.score < opt.inaccurate_tol)
        {
            x = best.x;
            s = best.s;
            z = best.z;
            tau = best.tau;
            res.reduced_accuracy = true;
            return finish(Status::Optimal, it);
        }
        return finish(st, it);
    };

    VectorXd lambda, rx, rz, ws;
    int stalls = 0;
    for (int it = 0;; ++it)
    {
        rx = Gs.transpose() * z + P.c * tau;
        rz = s + Gs * x - P.h * tau;
        const double cx = P.c.dot(x), hz = P.h.dot(z);
        const double rt = kappa + cx + hz;
        const double sz = s.dot(z);
        const double mu = (sz + tau * kappa) / (degree + 1.0);

        const double pres = rz.norm() / tau / hnorm;
        const double dres = rx.norm() / tau / cnorm;
        const double pcost = cx / tau, dcost = -hz / tau;
        const double gap = sz / (tau * tau);
        double relgap = kInf;
        if (pcost < 0.0)
            relgap = gap / -pcost;
        else if (dcost > 0.0)
            relgap = gap / dcost;

        if (pres < opt.feastol && dres < opt.feastol && (gap < opt.abstol || relgap < opt.reltol))
            return finish(Status::Optimal, it);
        if (hz < 0.0 && (Gs.transpose() * z).norm() / -hz < opt.feastol)
            return finish(Status::PrimalInfeasible, it);
        if (cx < 0.0 && (Gs * x + s).norm() / -cx < opt.feastol)
            return finish(Status::DualInfeasible, it);
        const double score = std::max({pres, dres, std::min(gap, relgap)});
        if (score < best.score)
            best = {score, x, s, z, tau};
        if (it >= opt.max_iterations)
            return fallback(Status::IterationLimit, it);

        if (!W.update(L, s, z) || !kkt.factor(L, W))
            return fallback(Status::NumericalFailure, it);
        W.apply(L, z, lambda, false);

        VectorXd x1, z1;
        kkt.solve(L, W, -P.c, P.h, x1, z1);
        const double den = P.c.dot(x1) + P.h.dot(z1) - kappa / tau;

        // One Newton direction for given (sigma, ds, dkappa)
        struct Dir
        {
            VectorXd dx, dz, ds;
            double dtau, dkappa;
        };
        auto direction = [&](double sigma, const VectorXd &dsv, double dk) {
            Dir d;
            const VectorXd dst = jdiv(L, lambda, dsv);
            W.apply(L, dst, ws, false);
            VectorXd x2, z2;
            kkt.solve(L, W, -(1.0 - sigma) * rx, -(1.0 - sigma) * rz - ws, x2, z2);
            d.dtau = (-(1.0 - sigma) * rt - dk / tau - P.c.dot(x2) - P.h.dot(z2)) / den;
            d.dx = x2 + d.dtau * x1;
            d.dz = z2 + d.dtau * z1;
            VectorXd wdz;
            W.apply(L, d.dz, wdz, false);
            W.apply(L, dst - wdz, d.ds, false);
            d.dkappa = (dk - kappa * d.dtau) / tau;
            return d;
        };
        auto step_to_boundary = [&](const Dir &d, VectorXd &sds, VectorXd &wdz) {
            W.apply(L, d.ds, sds, true);
            W.apply(L, d.dz, wdz, false);
            double a = std::min(max_step(L, lambda, sds), max_step(L, lambda, wdz));
            if (d.dtau < 0.0)
                a = std::min(a, -tau / d.dtau);
            if (d.dkappa < 0.0)
                a = std::min(a, -kappa / d.dkappa);
            return a;
        };

        // predictor
        const VectorXd ll = jprod(L, lambda, lambda);
        const Dir aff = direction(0.0, -ll, -tau * kappa);
        VectorXd sds_a, wdz_a;
        const double alpha_aff = std::min(1.0, step_to_boundary(aff, sds_a, wdz_a));
        const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

        // corrector
        const VectorXd dsc = -ll - jprod(L, sds_a, wdz_a) + sigma * mu * e;
        const double dkc = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
        const Dir d = direction(sigma, dsc, dkc);
        VectorXd sds, wdz;
        const double alpha = std::min(1.0, 0.99 * step_to_boundary(d, sds, wdz));
        if (!std::isfinite(alpha) || !d.dx.allFinite() || !d.dz.allFinite())
            return fallback(Status::NumericalFailure, it);

        x += alpha * d.dx;
        z += alpha * d.dz;
        s += alpha * d.ds;
        tau += alpha * d.dtau;
        kappa += alpha * d.dkappa;

        stalls = alpha < 1e-8 ? stalls + 1 : 0;
        if (stalls >= 3)
            return fallback(Status::NumericalFailure, it + 1);
    }
}

} // namespace jpsem::conic
