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

#ifndef JPSEM_CONIC_SOLVER_HPP
#define JPSEM_CONIC_SOLVER_HPP

// Small dense second-order cone programs
//
//     minimize    c'x
//     subject to  G x + s = h,   s in K = Q(m_1) x ... x Q(m_p)
//
// where Q(m) = {(u0, u1) in R x R^(m-1) : u0 >= ||u1||}. A cone of size 1 is
// the nonnegative ray, so linear inequalities are expressed as 1-dim cones.
//
// Primal-dual interior-point method on the homogeneous self-dual embedding with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector. The reduced KKT
// system G' W^-2 G is dense and factored by Cholesky, so G must have full
// column rank.

#include <Eigen/Dense>

#include <vector>

namespace jpsem::conic
{

struct Problem
{
    Eigen::VectorXd c;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    std::vector<int> cones; // sizes, summing to G.rows()
};

enum class Status
{
    Optimal,
    PrimalInfeasible, // z certifies: G'z = 0, h'z = -1, z in K
    DualInfeasible,   // x certifies: c'x = -1, -Gx in K
    IterationLimit,
    NumericalFailure,
};

const char *to_string(Status s);

struct Settings
{
    double feastol = 1e-8;
    double abstol = 1e-8;
    double reltol = 1e-8;
    double inaccurate_tol = 1e-5; // accepted for the best iterate when progress stalls
    int max_iterations = 100;
};

struct Result
{
    Status status = Status::NumericalFailure;
    Eigen::VectorXd x, s, z;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    int iterations = 0;
    bool reduced_accuracy = false; // Optimal only at inaccurate_tol
};

Result solve(const Problem &problem, const Settings &settings = {});

} // namespace jpsem::conic

#endif
