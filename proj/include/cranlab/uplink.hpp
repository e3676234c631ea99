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

#include "cranlab/quantization.hpp"
#include "cranlab/scenario.hpp"

namespace cranlab
{

// Absolute slack, bits/s/Hz, when comparing fronthaul requirements to caps.
inline constexpr double feasibility_tolerance = 1e-9;

enum class Receiver
{
    linear, // MMSE receive beamforming, interference treated as noise
    sic,
};

enum class UplinkCompression
{
    independent,
    wyner_ziv,
};

struct UplinkStrategy
{
    Receiver receiver = Receiver::linear;
    UplinkCompression compression = UplinkCompression::independent;
    std::vector<std::size_t> decoding_order;      // UEs; empty means default
    std::vector<std::size_t> decompression_order; // RUs; empty means default
};

struct RateReport
{
    std::vector<double> per_ue_rates;     // bits/s/Hz
    std::vector<double> per_ru_fronthaul; // bits/s/Hz
    bool feasible = false;

    double sum_rate() const;
    double total_fronthaul() const;
};

bool fronthaul_feasible(std::span<const double> required, std::span<const double> caps);

// Throws InvalidArgument unless `order` is a permutation of 0..n-1.
void require_permutation(std::span<const std::size_t> order, std::size_t n, const char *what);

// Rates below are in bits/s/Hz and indexed by UE (or RU), independent of the
// order argument. Uplink quantization is per RU: q must be block diagonal
// (InvalidQuantizer otherwise).

// R_i = log2|K| - log2|K - H_i Sigma_i H_i^H|, K = sum_k H_k Sigma_k H_k^H + Q + sigma^2 I.
std::vector<double> ul_rate_linear(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q);

// SIC in `order`: each UE sees interference only from UEs decoded after it.
std::vector<double> ul_rate_sic(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q,
                                std::span<const std::size_t> order);

// C_j = log2|R_jj + Q_j| - log2|Q_j|. SingularQuantizer if any Q_j is singular.
std::vector<double> ul_fronthaul_indep(const ClusterConfig &cfg, const ChannelRealization &ch,
                                       const QuantizationConfig &q);

// Wyner-Ziv: C_j = I(y_j; yhat_j | yhat of RUs decompressed earlier).
std::vector<double> ul_fronthaul_wyner_ziv(const ClusterConfig &cfg, const ChannelRealization &ch,
                                           const QuantizationConfig &q, std::span<const std::size_t> order);

// Descending received-signal power, ties broken by index.
std::vector<std::size_t> default_decoding_order(const ClusterConfig &cfg, const ChannelRealization &ch);
std::vector<std::size_t> default_decompression_order(const ClusterConfig &cfg, const ChannelRealization &ch);

RateReport evaluate_uplink(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q,
                           const UplinkStrategy &strategy);

// Sum over UEs of H_{:,i} Sigma_i H_{:,i}^H restricted to the listed UEs.
HermitianPsd ul_signal_cov(const ClusterConfig &cfg, const ChannelRealization &ch, std::span<const std::size_t> ues);

} // namespace cranlab
