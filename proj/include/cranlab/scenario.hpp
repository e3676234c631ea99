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
#include <span>
#include <vector>

#include "cranlab/matrix_core.hpp"

namespace cranlab
{

enum class DuplexMode
{
    tdd_reciprocal, // H^dl_{i,j} = (H^ul_{j,i})^T
    independent,
};

// One cooperating cluster of UEs and RUs. Fronthaul capacities are in
// bits/s/Hz, normalized to the uplink channel bandwidth. Pathloss is indexed
// (RU j, UE i) and sets the variance 10^(-PL/10) of every entry of H_{j,i}.
struct ClusterConfig
{
    std::size_t n_ue = 1;
    std::size_t n_ru = 1;
    std::size_t ue_antennas = 1;
    std::size_t ru_antennas = 1;
    std::vector<double> fronthaul_caps;
    double noise_var_ul = 1.0;
    double noise_var_dl = 1.0;
    std::vector<HermitianPsd> ue_tx_cov;
    Eigen::MatrixXd pathloss_db;
    double ru_power_per_antenna = 1.0; // downlink budget on trace(S_jj) / M_R

    void validate() const;

    std::size_t ul_rx_dim() const { return n_ru * ru_antennas; }
    std::size_t ul_tx_dim() const { return n_ue * ue_antennas; }
    double ru_power_budget() const { return ru_power_per_antenna * static_cast<double>(ru_antennas); }

    // Symmetric cluster: 0 dB pathloss, identity transmit covariances scaled
    // so each UE radiates `ue_power` in total, equal caps.
    static ClusterConfig uniform(std::size_t n_ue, std::size_t n_ru, std::size_t ue_antennas,
                                 std::size_t ru_antennas, double cap, double noise_var = 1.0,
                                 double ue_power = 1.0);
};

struct ChannelRealization
{
    ComplexMatrix h_ul; // (N_R M_R) x (N_U M_U)
    ComplexMatrix h_dl; // (N_U M_U) x (N_R M_R)
    std::uint64_t seed = 0;
    DuplexMode mode = DuplexMode::tdd_reciprocal;
};

// i.i.d. Rayleigh blocks keyed by (seed, block index); identical inputs give
// bit-identical realizations.
ChannelRealization generate_channel(const ClusterConfig &cfg, std::uint64_t seed, DuplexMode mode);

// Wraps explicit matrices; checks dimensions against cfg.
ChannelRealization make_channel(const ClusterConfig &cfg, ComplexMatrix h_ul, ComplexMatrix h_dl);
ChannelRealization make_reciprocal_channel(const ClusterConfig &cfg, ComplexMatrix h_ul);

// Block-diagonal Sigma_{N_U} = diag(Sigma_1, ..., Sigma_{N_U}).
HermitianPsd stacked_ue_cov(const ClusterConfig &cfg);

// sum_i H_{:,i} Sigma_i H_{:,i}^H, without noise.
HermitianPsd received_signal_cov_ul(const ClusterConfig &cfg, const ChannelRealization &ch);

// Covariance of the stacked uplink reception y^ul (signal plus noise).
HermitianPsd received_cov_ul(const ClusterConfig &cfg, const ChannelRealization &ch);

// Sub-cluster made of the listed RUs (in the given order); channel rows and
// columns are carried over unchanged.
struct SubCluster
{
    ClusterConfig cfg;
    ChannelRealization channel;
};
SubCluster restrict_to_rus(const ClusterConfig &cfg, const ChannelRealization &ch, std::span<const std::size_t> rus);

} // namespace cranlab
