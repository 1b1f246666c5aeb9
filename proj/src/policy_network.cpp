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

#include "jpsem/policy_network.hpp"
#include "jpsem/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

namespace jpsem
{

namespace
{

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kClamp = 1e-7;
constexpr const char *kMagic = "jpsem-policy-v1";

} // namespace

PolicyNetwork::PolicyNetwork(std::vector<int> widths) : widths_(std::move(widths))
{
    if (widths_.size() < 2)
        throw std::invalid_argument("policy network needs at least an input and an output layer");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l)
    {
        if (widths_[l] < 1 || widths_[l + 1] < 1)
            throw std::invalid_argument("layer widths must be positive");
        offsets_.push_back(total);
        total += static_cast<std::size_t>(widths_[l + 1]) * (widths_[l] + 1);
    }
    theta_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

PolicyNetwork PolicyNetwork::random(std::vector<int> widths, std::uint64_t seed)
{
    PolicyNetwork net(std::move(widths));
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < net.widths_.size(); ++l)
    {
        const double r = 1.0 / std::sqrt(static_cast<double>(net.widths_[l]));
        std::uniform_real_distribution<double> u(-r, r);
        const std::size_t count = static_cast<std::size_t>(net.widths_[l + 1]) * (net.widths_[l] + 1);
        for (std::size_t i = 0; i < count; ++i)
            net.theta_[static_cast<Eigen::Index>(net.offsets_[l] + i)] = u(rng);
    }
    return net;
}

std::size_t PolicyNetwork::weight_offset(int layer) const
{
    return offsets_[static_cast<std::size_t>(layer)];
}

Eigen::MatrixXd PolicyNetwork::forward(const Eigen::MatrixXd &inputs) const
{
    if (inputs.rows() != input_size())
        throw std::invalid_argument("policy network: input size mismatch");
    Eigen::MatrixXd a = inputs;
    const int layers = static_cast<int>(widths_.size()) - 1;
    for (int l = 0; l < layers; ++l)
    {
        const int fi = widths_[l], fo = widths_[l + 1];
        const double *p = theta_.data() + weight_offset(l);
        Eigen::Map<const RowMajor> W(p, fo, fi);
        Eigen::Map<const Eigen::VectorXd> b(p + static_cast<std::ptrdiff_t>(fo) * fi, fo);
        Eigen::MatrixXd z = W * a;
        z.colwise() += b;
        if (l + 1 < layers)
            a = z.cwiseMax(0.0);
        else
            a = 1.0 / (1.0 + (-z.array()).exp());
    }
    return a;
}

Eigen::VectorXd PolicyNetwork::forward(const Eigen::VectorXd &input) const
{
    return forward(Eigen::MatrixXd(input)).col(0);
}

double PolicyNetwork::loss(const Eigen::MatrixXd &inputs, const Eigen::MatrixXd &targets, Eigen::VectorXd *grad) const
{
    if (inputs.rows() != input_size() || targets.rows() != output_size() || inputs.cols() != targets.cols() ||
        inputs.cols() == 0)
        throw std::invalid_argument("policy network: batch shape mismatch");

    const int layers = static_cast<int>(widths_.size()) - 1;
    std::vector<Eigen::MatrixXd> acts{inputs}; // activations per layer
    std::vector<Eigen::MatrixXd> pre;          // pre-activations
    for (int l = 0; l < layers; ++l)
    {
        const int fi = widths_[l], fo = widths_[l + 1];
        const double *p = theta_.data() + weight_offset(l);
        Eigen::Map<const RowMajor> W(p, fo, fi);
        Eigen::Map<const Eigen::VectorXd> b(p + static_cast<std::ptrdiff_t>(fo) * fi, fo);
        Eigen::MatrixXd z = W * acts.back();
        z.colwise() += b;
        pre.push_back(z);
        if (l + 1 < layers)
            acts.push_back(z.cwiseMax(0.0));
        else
            acts.push_back((1.0 / (1.0 + (-z.array()).exp())).matrix());
    }

    const Eigen::ArrayXXd out = acts.back().array();
    const Eigen::ArrayXXd pc = out.cwiseMax(kClamp).cwiseMin(1.0 - kClamp);
    const Eigen::ArrayXXd y = targets.array();
    const double count = static_cast<double>(out.size());
    const double value = -(y * pc.log() + (1.0 - y) * (1.0 - pc).log()).sum() / count;
    if (!grad)
        return value;

    grad->setZero(theta_.size());
    // dL/dz through the clamp: zero where the clamp is active
    const Eigen::ArrayXXd inside = ((out > kClamp) && (out < 1.0 - kClamp)).cast<double>();
    Eigen::MatrixXd delta = (inside * (-y / pc + (1.0 - y) / (1.0 - pc)) * out * (1.0 - out) / count).matrix();

    for (int l = layers - 1; l >= 0; --l)
    {
        const int fi = widths_[l], fo = widths_[l + 1];
        double *g = grad->data() + weight_offset(l);
        Eigen::Map<RowMajor> gW(g, fo, fi);
        Eigen::Map<Eigen::VectorXd> gb(g + static_cast<std::ptrdiff_t>(fo) * fi, fo);
        gW = delta * acts[l].transpose();
        gb = delta.rowwise().sum();
        if (l > 0)
        {
            const double *p = theta_.data() + weight_offset(l);
            Eigen::Map<const RowMajor> W(p, fo, fi);
            Eigen::MatrixXd back = W.transpose() * delta;
            delta = (back.array() * (pre[l - 1].array() > 0.0).cast<double>()).matrix();
        }
    }
    return value;
}

void PolicyNetwork::save(const std::string &path) const
{
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot write '" + path + "'");
    f << kMagic << '\n' << widths_.size();
    for (int w : widths_)
        f << ' ' << w;
    f << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < theta_.size(); ++i)
        f << theta_[i] << '\n';
    if (!f)
        throw IoError("write failed for '" + path + "'");
}

PolicyNetwork PolicyNetwork::load(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open '" + path + "'");
    std::string magic;
    std::size_t count = 0;
    if (!(f >> magic >> count) || magic != kMagic || count < 2 || count > 64)
        throw IoError("'" + path + "' is not a policy checkpoint");
    std::vector<int> widths(count);
    for (auto &w : widths)
        if (!(f >> w))
            throw IoError("truncated checkpoint '" + path + "'");
    PolicyNetwork net(std::move(widths));
    for (Eigen::Index i = 0; i < net.theta_.size(); ++i)
        if (!(f >> net.theta_[i]))
            throw IoError("truncated checkpoint '" + path + "'");
    return net;
}

Adam::Adam(Eigen::Index size, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps), m_(Eigen::VectorXd::Zero(size)),
      v_(Eigen::VectorXd::Zero(size))
{
}

void Adam::step(Eigen::VectorXd &theta, const Eigen::VectorXd &grad)
{
    if (grad.size() != m_.size() || theta.size() != m_.size())
        throw std::invalid_argument("Adam: size mismatch");
    ++t_;
    m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
    v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    theta.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

} // namespace jpsem
