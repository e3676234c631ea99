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

#include "cranlab/quantization.hpp"

#include "cranlab/errors.hpp"

namespace cranlab
{

QuantizationConfig::QuantizationConfig(HermitianPsd covariance, std::size_t block_dim)
    : cov_(std::move(covariance)), block_dim_(block_dim)
{
    if (block_dim_ == 0 || cov_.dim() % block_dim_ != 0)
        fail(ErrorCode::DimensionMismatch, "quantization covariance is not a whole number of blocks");
}

QuantizationConfig QuantizationConfig::per_ru(std::span<const HermitianPsd> blocks)
{
    if (blocks.empty())
        fail(ErrorCode::InvalidArgument, "at least one RU block is required");
    const auto d = blocks.front().dim();
    for (const auto &b : blocks)
        if (b.dim() != d)
            fail(ErrorCode::DimensionMismatch, "all RU quantization blocks must have the same dimension");
    return {block_diagonal(blocks), d};
}

QuantizationConfig QuantizationConfig::isotropic(std::span<const double> noise_levels, std::size_t block_dim)
{
    std::vector<HermitianPsd> blocks;
    blocks.reserve(noise_levels.size());
    for (double a : noise_levels)
        blocks.push_back(HermitianPsd::identity(block_dim, a));
    return per_ru(blocks);
}

HermitianPsd QuantizationConfig::block(std::size_t j) const
{
    if (j >= n_blocks())
        fail(ErrorCode::IndexOutOfRange, "RU index out of range");
    return principal_submatrix(cov_, BlockIndexSet::single(j, block_dim_));
}

bool QuantizationConfig::has_cross_blocks() const
{
    return !is_block_diagonal(cov_, block_dim_, 1e-12 * cov_.matrix().norm());
}

QuantizationConfig QuantizationConfig::diagonal_part() const
{
    std::vector<HermitianPsd> blocks;
    for (std::size_t j = 0; j < n_blocks(); ++j)
        blocks.push_back(block(j));
    return per_ru(blocks);
}

} // namespace cranlab
