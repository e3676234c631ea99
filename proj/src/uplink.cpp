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

#include "cranlab/uplink.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cranlab/errors.hpp"

namespace cranlab
{

namespace
{

void require_uplink_quantizer(const ClusterConfig &cfg, const QuantizationConfig &q)
{
    if (q.covariance().dim() != cfg.ul_rx_dim() || q.block_dim() != cfg.ru_antennas)
        fail(ErrorCode::DimensionMismatch, "quantization covariance must cover N_R blocks of M_R antennas");
    if (q.has_cross_blocks())
        fail(ErrorCode::InvalidQuantizer, "uplink quantization is per RU; cross blocks must be zero");
}

ComplexMatrix ue_columns(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ue)
{
    const auto mu = static_cast<Eigen::Index>(cfg.ue_antennas);
    return ch.h_ul.middleCols(static_cast<Eigen::Index>(ue) * mu, mu);
}

HermitianPsd ue_contribution(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ue)
{
    return congruence(ue_columns(cfg, ch, ue), cfg.ue_tx_cov[ue]);
}

double log_ratio(const HermitianPsd &num, const HermitianPsd &den)
{
    return std::max(0.0, logdet2(num) - logdet2(den));
}

double logdet2_quantizer(const HermitianPsd &qj)
{
    try
    {
        return logdet2(qj);
    }
    catch (const Error &e)
    {
        if (e.code() == ErrorCode::SingularMatrix)
            fail(ErrorCode::SingularQuantizer, "quantization noise block is singular (infinite-rate signal)");
        throw;
    }
}

std::vector<std::size_t> descending_by(std::vector<double> key)
{
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return order;
}

} // namespace

double RateReport::sum_rate() const
{
    return std::accumulate(per_ue_rates.begin(), per_ue_rates.end(), 0.0);
}

double RateReport::total_fronthaul() const
{
    return std::accumulate(per_ru_fronthaul.begin(), per_ru_fronthaul.end(), 0.0);
}

bool fronthaul_feasible(std::span<const double> required, std::span<const double> caps)
{
    if (required.size() != caps.size())
        fail(ErrorCode::DimensionMismatch, "one fronthaul cap per RU is required");
    for (std::size_t j = 0; j < required.size(); ++j)
        if (!(required[j] <= caps[j] + feasibility_tolerance))
            return false;
    return true;
}

void require_permutation(std::span<const std::size_t> order, std::size_t n, const char *what)
{
    std::vector<bool> seen(n, false);
    if (order.size() != n)
        fail(ErrorCode::InvalidArgument, std::string(what) + " must be a permutation");
    for (auto k : order)
    {
        if (k >= n || seen[k])
            fail(ErrorCode::InvalidArgument, std::string(what) + " must be a permutation");
        seen[k] = true;
    }
}

HermitianPsd ul_signal_cov(const ClusterConfig &cfg, const ChannelRealization &ch, std::span<const std::size_t> ues)
{
    auto acc = HermitianPsd::zero(cfg.ul_rx_dim());
    for (auto i : ues)
        acc += ue_contribution(cfg, ch, i);
    return acc;
}

std::vector<double> ul_rate_linear(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q)
{
    require_uplink_quantizer(cfg, q);
    std::vector<std::size_t> all(cfg.n_ue);
    std::iota(all.begin(), all.end(), 0);
    const auto base = q.covariance().plus_identity(cfg.noise_var_ul);
    const auto total = ul_signal_cov(cfg, ch, all) + base;

    std::vector<double> rates(cfg.n_ue);
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
    {
        std::vector<std::size_t> others;
        for (std::size_t k = 0; k < cfg.n_ue; ++k)
            if (k != i)
                others.push_back(k);
        rates[i] = log_ratio(total, ul_signal_cov(cfg, ch, others) + base);
    }
    return rates;
}

std::vector<double> ul_rate_sic(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q,
                                std::span<const std::size_t> order)
{
    require_uplink_quantizer(cfg, q);
    require_permutation(order, cfg.n_ue, "decoding order");

    // suffix[p] = interference-plus-noise seen by the UE at position p, itself included.
    std::vector<HermitianPsd> suffix(cfg.n_ue + 1);
    suffix[cfg.n_ue] = q.covariance().plus_identity(cfg.noise_var_ul);
    for (std::size_t p = cfg.n_ue; p-- > 0;)
        suffix[p] = suffix[p + 1] + ue_contribution(cfg, ch, order[p]);

    std::vector<double> rates(cfg.n_ue);
    for (std::size_t p = 0; p < cfg.n_ue; ++p)
        rates[order[p]] = log_ratio(suffix[p], suffix[p + 1]);
    return rates;
}

std::vector<double> ul_fronthaul_indep(const ClusterConfig &cfg, const ChannelRealization &ch,
                                       const QuantizationConfig &q)
{
    require_uplink_quantizer(cfg, q);
    const auto r = received_cov_ul(cfg, ch);
    std::vector<double> c(cfg.n_ru);
    for (std::size_t j = 0; j < cfg.n_ru; ++j)
    {
        const auto blk = BlockIndexSet::single(j, cfg.ru_antennas);
        const auto qj = q.block(j);
        const double lq = logdet2_quantizer(qj);
        c[j] = std::max(0.0, logdet2(principal_submatrix(r, blk) + qj) - lq);
    }
    return c;
}

std::vector<double> ul_fronthaul_wyner_ziv(const ClusterConfig &cfg, const ChannelRealization &ch,
                                           const QuantizationConfig &q, std::span<const std::size_t> order)
{
    require_uplink_quantizer(cfg, q);
    require_permutation(order, cfg.n_ru, "decompression order");
    const auto t = received_cov_ul(cfg, ch) + q.covariance();

    std::vector<double> c(cfg.n_ru);
    double prev = 0.0; // log2 |T_{J_{p-1}}|
    for (std::size_t p = 0; p < cfg.n_ru; ++p)
    {
        const auto j = order[p];
        const double lq = logdet2_quantizer(q.block(j));
        const BlockIndexSet prefix(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p + 1)),
                                   cfg.ru_antennas);
        const double cur = logdet2(principal_submatrix(t, prefix));
        c[j] = std::max(0.0, cur - prev - lq);
        prev = cur;
    }
    return c;
}

std::vector<std::size_t> default_decoding_order(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    std::vector<double> power(cfg.n_ue);
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
        power[i] = ue_contribution(cfg, ch, i).trace();
    return descending_by(std::move(power));
}

std::vector<std::size_t> default_decompression_order(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    const auto s = received_signal_cov_ul(cfg, ch);
    std::vector<double> power(cfg.n_ru);
    for (std::size_t j = 0; j < cfg.n_ru; ++j)
        power[j] = principal_submatrix(s, BlockIndexSet::single(j, cfg.ru_antennas)).trace();
    return descending_by(std::move(power));
}

RateReport evaluate_uplink(const ClusterConfig &cfg, const ChannelRealization &ch, const QuantizationConfig &q,
                           const UplinkStrategy &strategy)
{
    RateReport rep;
    if (strategy.receiver == Receiver::linear)
    {
        rep.per_ue_rates = ul_rate_linear(cfg, ch, q);
    }
    else
    {
        const auto order = strategy.decoding_order.empty() ? default_decoding_order(cfg, ch) : strategy.decoding_order;
        rep.per_ue_rates = ul_rate_sic(cfg, ch, q, order);
    }

    if (strategy.compression == UplinkCompression::independent)
    {
        rep.per_ru_fronthaul = ul_fronthaul_indep(cfg, ch, q);
    }
    else
    {
        const auto order = strategy.decompression_order.empty() ? default_decompression_order(cfg, ch)
                                                                : strategy.decompression_order;
        rep.per_ru_fronthaul = ul_fronthaul_wyner_ziv(cfg, ch, q, order);
    }
    rep.feasible = fronthaul_feasible(rep.per_ru_fronthaul, cfg.fronthaul_caps);
    return rep;
}

} // namespace cranlab
