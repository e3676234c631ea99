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

#include "cranlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace cranlab
{

std::uint64_t mix64(std::uint64_t x) noexcept
{
    // SplitMix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept
{
    return mix64(mix64(seed) ^ (salt * 0xd1b54a32d192ed03ULL));
}

CounterRng::CounterRng(std::uint64_t key, std::uint64_t stream) noexcept
    : base_(mix64(mix64(key) ^ mix64(stream ^ 0x5851f42d4c957f2dULL)))
{
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept
{
    return mix64(base_ ^ mix64(counter * 0xda942042e4dd58b5ULL));
}

double CounterRng::uniform(std::uint64_t counter) const noexcept
{
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

Complex CounterRng::complex_normal(std::uint64_t k, double variance) const noexcept
{
    // |h|^2 ~ Exp(variance), phase uniform.
    const double u1 = 1.0 - uniform(2 * k); // (0, 1]
    const double u2 = uniform(2 * k + 1);
    const double r = std::sqrt(-variance * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

} // namespace cranlab
