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

#include <cstdint>

#include "cranlab/matrix_core.hpp"

namespace cranlab
{

// Counter-based generator: the output at (key, stream, counter) is a pure
// function of those three values, so independent streams can be drawn in any
// order and adding streams never perturbs existing ones.
class CounterRng
{
public:
    CounterRng(std::uint64_t key, std::uint64_t stream) noexcept;

    std::uint64_t bits(std::uint64_t counter) const noexcept;

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform(std::uint64_t counter) const noexcept;

    // Circularly-symmetric complex Gaussian CN(0, variance) built from the
    // uniforms at counters 2k and 2k + 1.
    Complex complex_normal(std::uint64_t k, double variance) const noexcept;

    std::uint64_t next_bits() noexcept { return bits(counter_++); }
    double next_uniform() noexcept { return uniform(counter_++); }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// Derives a child seed, e.g. per frame of a simulation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept;

} // namespace cranlab
