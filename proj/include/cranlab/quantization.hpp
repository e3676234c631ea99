// SPDX-License-Identifier: Apache-2.0
//
// cranlab: C-RAN capacity and fronthaul engineering toolkit
// Copyright (C) 2026 The cranlab authors
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

#pragma once

#include <span>
#include <vector>

#include "cranlab/matrix_core.hpp"

namespace cranlab
{

// Quantization-noise covariance over all RU antennas: per-RU diagonal blocks
// Q_{j,j} plus optional cross blocks Q_{i,j} (downlink multivariate
// compression only).
class QuantizationConfig
{
public:
    QuantizationConfig() = default;
    QuantizationConfig(HermitianPsd covariance, std::size_t block_dim);

    static QuantizationConfig per_ru(std::span<const HermitianPsd> blocks);
    static QuantizationConfig isotropic(std::span<const double> noise_levels, std::size_t block_dim);

    const HermitianPsd &covariance() const { return cov_; }
    std::size_t block_dim() const { return block_dim_; }
    std::size_t n_blocks() const { return block_dim_ == 0 ? 0 : cov_.dim() / block_dim_; }

    HermitianPsd block(std::size_t j) const;

    // Cross blocks with Frobenius norm above 1e-12 * ||Q||.
    bool has_cross_blocks() const;

    QuantizationConfig diagonal_part() const;

private:
    HermitianPsd cov_;
    std::size_t block_dim_ = 0;
};

} // namespace cranlab
