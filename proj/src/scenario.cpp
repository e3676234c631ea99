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

#include "cranlab/scenario.hpp"

#include <cmath>
#include <string>

#include "cranlab/errors.hpp"
#include "cranlab/rng.hpp"

namespace cranlab
{

namespace
{

constexpr std::uint64_t ul_stream_tag = 0;
constexpr std::uint64_t dl_stream_tag = 1;

std::uint64_t block_stream(std::uint64_t tag, std::size_t a, std::size_t b)
{
    return (tag << 62) | (static_cast<std::uint64_t>(a) << 31) | static_cast<std::uint64_t>(b);
}

void fill_block(ComplexMatrix &h, std::size_t row0, std::size_t col0, std::size_t rows, std::size_t cols,
                const CounterRng &rng, double variance)
{
    std::uint64_t k = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            h(static_cast<Eigen::Index>(row0 + r), static_cast<Eigen::Index>(col0 + c)) = rng.complex_normal(k++, variance);
}

} // namespace

void ClusterConfig::validate() const
{
    if (n_ue < 1 || n_ru < 1 || ue_antennas < 1 || ru_antennas < 1)
        fail(ErrorCode::InvalidConfig, "all counts must be at least 1");
    if (fronthaul_caps.size() != n_ru)
        fail(ErrorCode::InvalidConfig, "fronthaul_caps must have one entry per RU");
    for (double c : fronthaul_caps)
        if (!(c >= 0.0))
            fail(ErrorCode::InvalidConfig, "fronthaul capacities must be non-negative");
    if (!(noise_var_ul > 0.0) || !(noise_var_dl > 0.0) || !std::isfinite(noise_var_ul) || !std::isfinite(noise_var_dl))
        fail(ErrorCode::InvalidConfig, "noise variances must be positive and finite");
    if (ue_tx_cov.size() != n_ue)
        fail(ErrorCode::InvalidConfig, "ue_tx_cov must have one entry per UE");
    for (const auto &s : ue_tx_cov)
        if (s.dim() != ue_antennas)
            fail(ErrorCode::InvalidConfig, "each UE transmit covariance must be M_U x M_U");
    if (pathloss_db.rows() != static_cast<Eigen::Index>(n_ru) || pathloss_db.cols() != static_cast<Eigen::Index>(n_ue))
        fail(ErrorCode::InvalidConfig, "pathloss_db must be n_ru x n_ue");
    if (!pathloss_db.allFinite())
        fail(ErrorCode::InvalidConfig, "pathloss_db entries must be finite");
    if (!(ru_power_per_antenna > 0.0))
        fail(ErrorCode::InvalidConfig, "ru_power_per_antenna must be positive");
}

ClusterConfig ClusterConfig::uniform(std::size_t n_ue, std::size_t n_ru, std::size_t ue_antennas,
                                     std::size_t ru_antennas, double cap, double noise_var, double ue_power)
{
    ClusterConfig cfg;
    cfg.n_ue = n_ue;
    cfg.n_ru = n_ru;
    cfg.ue_antennas = ue_antennas;
    cfg.ru_antennas = ru_antennas;
    cfg.fronthaul_caps.assign(n_ru, cap);
    cfg.noise_var_ul = noise_var;
    cfg.noise_var_dl = noise_var;
    cfg.ue_tx_cov.assign(n_ue, HermitianPsd::identity(ue_antennas, ue_power / static_cast<double>(ue_antennas)));
    cfg.pathloss_db = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_ru), static_cast<Eigen::Index>(n_ue));
    cfg.validate();
    return cfg;
}

ChannelRealization generate_channel(const ClusterConfig &cfg, std::uint64_t seed, DuplexMode mode)
{
    cfg.validate();
    const auto mr = cfg.ru_antennas;
    const auto mu = cfg.ue_antennas;
    ChannelRealization ch;
    ch.seed = seed;
    ch.mode = mode;
    ch.h_ul.resize(static_cast<Eigen::Index>(cfg.ul_rx_dim()), static_cast<Eigen::Index>(cfg.ul_tx_dim()));
    for (std::size_t j = 0; j < cfg.n_ru; ++j)
        for (std::size_t i = 0; i < cfg.n_ue; ++i)
        {
            const double var = std::pow(10.0, -cfg.pathloss_db(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) / 10.0);
            fill_block(ch.h_ul, j * mr, i * mu, mr, mu, CounterRng(seed, block_stream(ul_stream_tag, j, i)), var);
        }

    if (mode == DuplexMode::tdd_reciprocal)
    {
        ch.h_dl = ch.h_ul.transpose();
    }
    else
    {
        ch.h_dl.resize(static_cast<Eigen::Index>(cfg.ul_tx_dim()), static_cast<Eigen::Index>(cfg.ul_rx_dim()));
        for (std::size_t i = 0; i < cfg.n_ue; ++i)
            for (std::size_t j = 0; j < cfg.n_ru; ++j)
            {
                const double var = std::pow(10.0, -cfg.pathloss_db(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) / 10.0);
                fill_block(ch.h_dl, i * mu, j * mr, mu, mr, CounterRng(seed, block_stream(dl_stream_tag, i, j)), var);
            }
    }
    return ch;
}

ChannelRealization make_channel(const ClusterConfig &cfg, ComplexMatrix h_ul, ComplexMatrix h_dl)
{
    const auto rx = static_cast<Eigen::Index>(cfg.ul_rx_dim());
    const auto tx = static_cast<Eigen::Index>(cfg.ul_tx_dim());
    if (h_ul.rows() != rx || h_ul.cols() != tx)
        fail(ErrorCode::DimensionMismatch, "uplink channel must be (N_R M_R) x (N_U M_U)");
    if (h_dl.rows() != tx || h_dl.cols() != rx)
        fail(ErrorCode::DimensionMismatch, "downlink channel must be (N_U M_U) x (N_R M_R)");
    ChannelRealization ch;
    ch.h_ul = std::move(h_ul);
    ch.h_dl = std::move(h_dl);
    ch.mode = DuplexMode::independent;
    return ch;
}

ChannelRealization make_reciprocal_channel(const ClusterConfig &cfg, ComplexMatrix h_ul)
{
    ComplexMatrix h_dl = h_ul.transpose();
    auto ch = make_channel(cfg, std::move(h_ul), std::move(h_dl));
    ch.mode = DuplexMode::tdd_reciprocal;
    return ch;
}

HermitianPsd stacked_ue_cov(const ClusterConfig &cfg)
{
    return block_diagonal(cfg.ue_tx_cov);
}

HermitianPsd received_signal_cov_ul(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    if (ch.h_ul.rows() != static_cast<Eigen::Index>(cfg.ul_rx_dim()) ||
        ch.h_ul.cols() != static_cast<Eigen::Index>(cfg.ul_tx_dim()) || cfg.ue_tx_cov.size() != cfg.n_ue)
        fail(ErrorCode::DimensionMismatch, "channel does not match the cluster configuration");
    return congruence(ch.h_ul, stacked_ue_cov(cfg));
}

HermitianPsd received_cov_ul(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    return received_signal_cov_ul(cfg, ch).plus_identity(cfg.noise_var_ul);
}

SubCluster restrict_to_rus(const ClusterConfig &cfg, const ChannelRealization &ch, std::span<const std::size_t> rus)
{
    const BlockIndexSet sel(std::vector<std::size_t>(rus.begin(), rus.end()), cfg.ru_antennas);
    const auto ues = BlockIndexSet::all(cfg.n_ue, cfg.ue_antennas);

    SubCluster out{cfg, ch};
    out.cfg.n_ru = rus.size();
    out.cfg.fronthaul_caps.clear();
    out.cfg.pathloss_db.resize(static_cast<Eigen::Index>(rus.size()), static_cast<Eigen::Index>(cfg.n_ue));
    for (std::size_t k = 0; k < rus.size(); ++k)
    {
        if (rus[k] >= cfg.n_ru)
            fail(ErrorCode::IndexOutOfRange, "RU index out of range");
        out.cfg.fronthaul_caps.push_back(cfg.fronthaul_caps[rus[k]]);
        out.cfg.pathloss_db.row(static_cast<Eigen::Index>(k)) = cfg.pathloss_db.row(static_cast<Eigen::Index>(rus[k]));
    }
    out.channel.h_ul = block_submatrix(ch.h_ul, sel, ues);
    out.channel.h_dl = block_submatrix(ch.h_dl, ues, sel);
    return out;
}

} // namespace cranlab
