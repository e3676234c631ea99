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
#include "cranlab/uplink.hpp"

namespace cranlab
{

enum class Precoding
{
    linear, // multiuser interference treated as noise
    dpc,    // dirty-paper coding in the precoding order
};

enum class DownlinkCompression
{
    independent,
    multivariate,
};

// How the quantization covariance enters the rate expressions. `once` adds
// the physical quantization noise a single time; `per_user_literal` adds Q
// inside every per-UE term of the interference sums.
enum class QuantNoiseMode
{
    once,
    per_user_literal,
};

// Per-UE transmit covariances over all RU antennas. The eigenvectors of each
// Sigma_i are the beamformers of UE i across the RUs.
class DlSignalPlan
{
public:
    DlSignalPlan() = default;
    DlSignalPlan(std::vector<HermitianPsd> per_ue_tx_cov, std::vector<std::size_t> precoding_order,
                 std::size_t ru_block_dim);

    const std::vector<HermitianPsd> &per_ue_tx_cov() const { return covs_; }
    const std::vector<std::size_t> &precoding_order() const { return order_; }
    std::size_t n_ue() const { return covs_.size(); }
    std::size_t block_dim() const { return block_dim_; }
    std::size_t n_ru() const { return covs_.empty() ? 0 : covs_.front().dim() / block_dim_; }

    // sum_i Sigma_i
    HermitianPsd total_cov() const;
    // S_jj, the (j, j) block of the total transmit covariance.
    HermitianPsd ru_block(std::size_t j) const;
    std::vector<double> per_ru_power() const;
    bool within_budget(double per_ru_budget, double rel_tol = 1e-9) const;

private:
    std::vector<HermitianPsd> covs_;
    std::vector<std::size_t> order_;
    std::size_t block_dim_ = 1;
};

std::vector<double> dl_rate_linear(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                                   const QuantizationConfig &q, QuantNoiseMode mode = QuantNoiseMode::once);

// Each UE sees interference only from UEs later in `order`.
std::vector<double> dl_rate_dpc(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                                const QuantizationConfig &q, std::span<const std::size_t> order,
                                QuantNoiseMode mode = QuantNoiseMode::once);

// Transmit-side covariances K_p with K_p = sum_{r >= p} Sigma_{order[r]} + Q
// (Q counted per term in literal mode); K_{N_U} is the bare quantization
// term. UE order[p] has numerator K_p and denominator K_{p+1}.
std::vector<HermitianPsd> dl_dpc_inner_covariances(const DlSignalPlan &plan, const QuantizationConfig &q,
                                                   std::span<const std::size_t> order,
                                                   QuantNoiseMode mode = QuantNoiseMode::once);

// C_j = log2|S_jj + Q_jj| - log2|Q_jj|. Cross blocks of q must be zero.
std::vector<double> dl_fronthaul_indep(const DlSignalPlan &plan, const QuantizationConfig &q);

// Successive multivariate encoding in `order`: the independent term plus
// log2|Q_jj| - log2|Q_jj - Q_{j,J} Q_{J,J}^{-1} Q_{J,j}| over earlier RUs J.
std::vector<double> dl_fronthaul_multivariate(const DlSignalPlan &plan, const QuantizationConfig &q,
                                              std::span<const std::size_t> order);

// Descending ||H^dl_i||_F^2, ties broken by index.
std::vector<std::size_t> default_precoding_order(const ClusterConfig &cfg, const ChannelRealization &ch);

// Zero-forcing over the aggregate downlink channel with a common power scale
// set by the tightest per-RU budget. Falls back to regularized inversion when
// the RUs have fewer antennas than the UEs.
DlSignalPlan zero_forcing_plan(const ClusterConfig &cfg, const ChannelRealization &ch);

struct DownlinkStrategy
{
    Precoding precoding = Precoding::linear;
    DownlinkCompression compression = DownlinkCompression::independent;
    std::vector<std::size_t> precoding_order; // empty means the plan's order
    std::vector<std::size_t> encoding_order;  // empty means 0..N_R-1
    QuantNoiseMode noise_mode = QuantNoiseMode::once;
};

// Checks per-RU power budgets (PowerBudgetExceeded) before evaluating.
RateReport evaluate_downlink(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                             const QuantizationConfig &q, const DownlinkStrategy &strategy);

} // namespace cranlab
