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

#ifndef JPSEM_TENSOR_HPP
#define JPSEM_TENSOR_HPP

#include <complex>
#include <span>
#include <vector>

namespace jpsem
{

using cplx = std::complex<double>;

// Complex (BS n, user k, antenna m) array. Storage is user-major so that the
// N*M coefficients belonging to one user are contiguous.
class LinkTensor
{
public:
    LinkTensor() = default;
    LinkTensor(int num_bs, int num_users, int num_antennas)
        : num_bs_(num_bs), num_users_(num_users), num_antennas_(num_antennas),
          data_(static_cast<std::size_t>(num_bs) * num_users * num_antennas)
    {
    }

    int num_bs() const { return num_bs_; }
    int num_users() const { return num_users_; }
    int num_antennas() const { return num_antennas_; }
    std::size_t size() const { return data_.size(); }

    cplx &operator()(int n, int k, int m) { return data_[index(n, k, m)]; }
    const cplx &operator()(int n, int k, int m) const { return data_[index(n, k, m)]; }

    // The M coefficients of link (n, k)
    std::span<cplx> link(int n, int k) { return {data_.data() + index(n, k, 0), static_cast<std::size_t>(num_antennas_)}; }
    std::span<const cplx> link(int n, int k) const
    {
        return {data_.data() + index(n, k, 0), static_cast<std::size_t>(num_antennas_)};
    }

    std::span<cplx> flat() { return data_; }
    std::span<const cplx> flat() const { return data_; }

    bool same_shape(const LinkTensor &o) const
    {
        return num_bs_ == o.num_bs_ && num_users_ == o.num_users_ && num_antennas_ == o.num_antennas_;
    }

    bool operator==(const LinkTensor &o) const = default;

private:
    std::size_t index(int n, int k, int m) const
    {
        return (static_cast<std::size_t>(k) * num_bs_ + n) * num_antennas_ + m;
    }

    int num_bs_ = 0;
    int num_users_ = 0;
    int num_antennas_ = 0;
    std::vector<cplx> data_;
};

} // namespace jpsem

#endif
