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

#include "cranlab/downlink.hpp"
#include "cranlab/quantization.hpp"
#include "cranlab/scenario.hpp"

namespace cranlab
{

// Scalar uniform quantizer applied to I and Q of every antenna. `step` is the
// quantization step (cell width); full_scale is the amplitude span it covers.
struct UniformQuantizerModel
{
    double full_scale = 1.0;
    double step = 1.0;
};

// 2 log2(full_scale / step) bits per complex sample. InvalidRange unless
// 0 < step <= full_scale.
double uniform_rate(const UniformQuantizerModel &model);

// Step giving `bits` bits per real component: full_scale * 2^(1 - bits).
double step_for_component_bits(double full_scale, unsigned bits);

// Gaussian-equivalent noise covariance: step^2 / 12 per real component, so
// step^2 / 6 per complex antenna sample. Accepts step == 0 (no noise).
HermitianPsd uniform_noise_cov(const UniformQuantizerModel &model, std::size_t dim);

enum class FronthaulLink
{
    ul_indep,
    ul_wz,
    dl_indep,
};

// Bisection residual target, bits.
inline constexpr double cap_fit_tolerance = 1e-9;

struct CapFit
{
    HermitianPsd q;       // alpha * shape
    double alpha = 0.0;
    double achieved = 0.0; // fronthaul cost at alpha, bits/s/Hz
    double residual = 0.0; // |achieved - cap|
    bool converged = false; // false when even vanishing noise stays below the cap
    int iterations = 0;
};

// Finds alpha with log2|signal + alpha B| - log2|alpha B| = cap by bisection
// on log(alpha). The cost is strictly decreasing in alpha for a nonzero
// signal. CapTooSmall when alpha = 1e9 * trace still costs more than the cap.
CapFit fit_shaped_noise(const HermitianPsd &signal, const HermitianPsd &shape, double cap);

// Extra inputs a link needs: Wyner-Ziv fits condition on the quantizers
// already chosen for the RUs listed in `earlier_rus`; downlink fits need the
// signal plan.
struct FitContext
{
    const QuantizationConfig *earlier_q = nullptr;
    std::vector<std::size_t> earlier_rus;
    const DlSignalPlan *plan = nullptr;
};

// Isotropic Q_j = alpha * I meeting `cap` on RU `ru` for the given link.
CapFit fit_q_to_cap_detailed(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ru, double cap,
                             FronthaulLink link, const FitContext &ctx = {});
HermitianPsd fit_q_to_cap(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ru, double cap,
                          FronthaulLink link, const FitContext &ctx = {});

struct FittedQuantization
{
    QuantizationConfig q;
    std::vector<CapFit> fits; // indexed by RU
};

// Fits every RU to its cap. Wyner-Ziv fits run sequentially along `order`
// (empty: default decompression order); the result then meets every WZ cap.
FittedQuantization fit_all_to_caps(const ClusterConfig &cfg, const ChannelRealization &ch,
                                   std::span<const double> caps, FronthaulLink link,
                                   std::span<const std::size_t> order = {}, const DlSignalPlan *plan = nullptr);

struct ProbePoint
{
    double snr_db = 0.0;
    double isotropic_sum_rate = 0.0;
    double best_diagonal_sum_rate = 0.0;
    double relative_gap = 0.0; // (best - isotropic) / best
    std::vector<std::vector<double>> best_shape; // per RU, per antenna
    double fronthaul_budget = 0.0;               // total over RUs, bits/s/Hz
};

enum class ProbeBudget
{
    // Every RU keeps its own cap at every SNR; shapes only move noise
    // between the antennas of one RU.
    per_ru_caps,
    // Uniform noise stays at a fixed multiple of the background noise (the
    // multiple that spends the summed caps at 0 dB); the diagonal search gets
    // the same total fronthaul as the uniform design, split freely across RUs.
    noise_proportional,
};

struct ProbeOptions
{
    ProbeBudget budget = ProbeBudget::per_ru_caps;
    double weight_min_log2 = -4.0;
    double weight_max_log2 = 4.0;
    double weight_step_log2 = 0.5;
    int sweeps = 3;
};

// Compares the joint-decoding sum-rate under isotropic Q_j with the best
// diagonal shape found by coordinate grid search, at each SNR (per-UE
// transmit power over uplink noise). With fixed per-RU caps and single-antenna
// RUs there is nothing to search and the gap is zero.
std::vector<ProbePoint> uniform_near_optimality_probe(const ClusterConfig &cfg, const ChannelRealization &ch,
                                                      std::span<const double> caps, std::span<const double> snr_db,
                                                      const ProbeOptions &options = {});

struct MultivariateDesign
{
    QuantizationConfig q;
    double correlation = 0.0; // grid value of the null-space weight
    double sum_rate = 0.0;
    std::vector<double> fronthaul;
};

// Correlated downlink quantization meeting per-RU multivariate caps. The
// noise shape blends white noise with noise confined to the null space of the
// aggregate downlink channel; the blend weight is chosen by grid search for
// the best linear-precoding sum-rate. Weight 0 is independent compression.
MultivariateDesign design_multivariate_q(const ClusterConfig &cfg, const ChannelRealization &ch,
                                         const DlSignalPlan &plan, std::span<const double> caps,
                                         std::span<const std::size_t> encoding_order,
                                         std::span<const double> weight_grid = {});

} // namespace cranlab
