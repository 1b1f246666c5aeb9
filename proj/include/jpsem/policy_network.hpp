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

#ifndef JPSEM_POLICY_NETWORK_HPP
#define JPSEM_POLICY_NETWORK_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace jpsem
{

// Fully connected network: ReLU on hidden layers, logistic sigmoid on the output.
//
// All weights and biases live in one flat vector. For each layer l with fan-in
// a and fan-out b the block is W_l (b x a, row-major) followed by b_l (b).
class PolicyNetwork
{
public:
    PolicyNetwork() = default;
    explicit PolicyNetwork(std::vector<int> widths); // zero parameters

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights and biases
    static PolicyNetwork random(std::vector<int> widths, std::uint64_t seed);

    const std::vector<int> &widths() const { return widths_; }
    int input_size() const { return widths_.front(); }
    int output_size() const { return widths_.back(); }

    Eigen::VectorXd &parameters() { return theta_; }
    const Eigen::VectorXd &parameters() const { return theta_; }

    // Outputs in (0, 1); one sample per column
    Eigen::MatrixXd forward(const Eigen::MatrixXd &inputs) const;
    Eigen::VectorXd forward(const Eigen::VectorXd &input) const;

    // Mean element-wise binary cross-entropy against targets in [0, 1], with the
    // outputs clamped to [1e-7, 1 - 1e-7]. Fills grad (same layout as the
    // parameters) when given.
    double loss(const Eigen::MatrixXd &inputs, const Eigen::MatrixXd &targets, Eigen::VectorXd *grad = nullptr) const;

    // Text checkpoint: a header line, the widths, then every parameter
    void save(const std::string &path) const;
    static PolicyNetwork load(const std::string &path);

    bool operator==(const PolicyNetwork &o) const { return widths_ == o.widths_ && theta_ == o.theta_; }

private:
    std::size_t weight_offset(int layer) const;

    std::vector<int> widths_;
    std::vector<std::size_t> offsets_;
    Eigen::VectorXd theta_;
};

// Adam on a flat parameter vector
class Adam
{
public:
    Adam() = default;
    Adam(Eigen::Index size, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    void step(Eigen::VectorXd &theta, const Eigen::VectorXd &grad);
    long steps() const { return t_; }

private:
    double lr_ = 1e-3, beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    Eigen::VectorXd m_, v_;
};

} // namespace jpsem

#endif
