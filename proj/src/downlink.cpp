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

#include "cranlab/downlink.hpp"

#include <algorithm>
#include <numeric>

#include "cranlab/errors.hpp"

namespace cranlab
{

namespace
{

void require_plan_matches(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                          const QuantizationConfig &q)
{
    if (plan.n_ue() != cfg.n_ue || plan.block_dim() != cfg.ru_antennas || plan.n_ru() != cfg.n_ru)
        fail(ErrorCode::DimensionMismatch, "signal plan does not match the cluster");
    if (q.covariance().dim() != cfg.ul_rx_dim() || q.block_dim() != cfg.ru_antennas)
        fail(ErrorCode::DimensionMismatch, "quantization covariance must cover N_R blocks of M_R antennas");
    if (ch.h_dl.rows() != static_cast<Eigen::Index>(cfg.ul_tx_dim()) ||
        ch.h_dl.cols() != static_cast<Eigen::Index>(cfg.ul_rx_dim()))
        fail(ErrorCode::DimensionMismatch, "downlink channel does not match the cluster");
}

ComplexMatrix ue_rows(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ue)
{
    const auto mu = static_cast<Eigen::Index>(cfg.ue_antennas);
    return ch.h_dl.middleRows(static_cast<Eigen::Index>(ue) * mu, mu);
}

double received_log_ratio(const ComplexMatrix &h, const HermitianPsd &num, const HermitianPsd &den, double noise)
{
    const double v = logdet2(congruence(h, num).plus_identity(noise)) - logdet2(congruence(h, den).plus_identity(noise));
    return std::max(0.0, v);
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
            fail(ErrorCode::SingularQuantizer, "quantization noise block is singular");
        throw;
    }
}

} // namespace

DlSignalPlan::DlSignalPlan(std::vector<HermitianPsd> per_ue_tx_cov, std::vector<std::size_t> precoding_order,
                           std::size_t ru_block_dim)
    : covs_(std::move(per_ue_tx_cov)), order_(std::move(precoding_order)), block_dim_(ru_block_dim)
{
    if (covs_.empty())
        fail(ErrorCode::InvalidArgument, "signal plan needs at least one UE");
    if (block_dim_ == 0 || covs_.front().dim() % block_dim_ != 0)
        fail(ErrorCode::DimensionMismatch, "transmit covariance is not a whole number of RU blocks");
    for (const auto &c : covs_)
        if (c.dim() != covs_.front().dim())
            fail(ErrorCode::DimensionMismatch, "all transmit covariances must span the same RU antennas");
    if (order_.empty())
    {
        order_.resize(covs_.size());
        std::iota(order_.begin(), order_.end(), 0);
    }
    require_permutation(order_, covs_.size(), "precoding order");
}

HermitianPsd DlSignalPlan::total_cov() const
{
    auto acc = HermitianPsd::zero(covs_.front().dim());
    for (const auto &c : covs_)
        acc += c;
    return acc;
}

HermitianPsd DlSignalPlan::ru_block(std::size_t j) const
{
    if (j >= n_ru())
        fail(ErrorCode::IndexOutOfRange, "RU index out of range");
    return principal_submatrix(total_cov(), BlockIndexSet::single(j, block_dim_));
}

std::vector<double> DlSignalPlan::per_ru_power() const
{
    const auto s = total_cov();
    std::vector<double> p(n_ru());
    for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = principal_submatrix(s, BlockIndexSet::single(j, block_dim_)).trace();
    return p;
}

bool DlSignalPlan::within_budget(double per_ru_budget, double rel_tol) const
{
    for (double p : per_ru_power())
        if (p > per_ru_budget * (1.0 + rel_tol))
            return false;
    return true;
}

std::vector<double> dl_rate_linear(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                                   const QuantizationConfig &q, QuantNoiseMode mode)
{
    require_plan_matches(cfg, ch, plan, q);
    const double n = static_cast<double>(cfg.n_ue);
    const auto signal = plan.total_cov();
    const auto num = signal + (mode == QuantNoiseMode::once ? q.covariance() : q.covariance().scaled(n));

    std::vector<double> rates(cfg.n_ue);
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
    {
        auto others = HermitianPsd::zero(signal.dim());
        for (std::size_t k = 0; k < cfg.n_ue; ++k)
            if (k != i)
                others += plan.per_ue_tx_cov()[k];
        const auto den = others + (mode == QuantNoiseMode::once ? q.covariance() : q.covariance().scaled(n - 1.0));
        rates[i] = received_log_ratio(ue_rows(cfg, ch, i), num, den, cfg.noise_var_dl);
    }
    return rates;
}

std::vector<HermitianPsd> dl_dpc_inner_covariances(const DlSignalPlan &plan, const QuantizationConfig &q,
                                                   std::span<const std::size_t> order, QuantNoiseMode mode)
{
    const auto n = plan.n_ue();
    require_permutation(order, n, "precoding order");
    if (q.covariance().dim() != plan.total_cov().dim())
        fail(ErrorCode::DimensionMismatch, "quantization covariance does not match the signal plan");

    std::vector<HermitianPsd> inner(n + 1);
    if (mode == QuantNoiseMode::once)
    {
        inner[n] = q.covariance();
        for (std::size_t p = n; p-- > 0;)
            inner[p] = inner[p + 1] + plan.per_ue_tx_cov()[order[p]];
    }
    else
    {
        inner[n] = HermitianPsd::zero(q.covariance().dim());
        for (std::size_t p = n; p-- > 0;)
            inner[p] = inner[p + 1] + plan.per_ue_tx_cov()[order[p]] + q.covariance();
    }
    return inner;
}

std::vector<double> dl_rate_dpc(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                                const QuantizationConfig &q, std::span<const std::size_t> order, QuantNoiseMode mode)
{
    require_plan_matches(cfg, ch, plan, q);
    const auto inner = dl_dpc_inner_covariances(plan, q, order, mode);
    std::vector<double> rates(cfg.n_ue);
    for (std::size_t p = 0; p < cfg.n_ue; ++p)
    {
        const auto i = order[p];
        rates[i] = received_log_ratio(ue_rows(cfg, ch, i), inner[p], inner[p + 1], cfg.noise_var_dl);
    }
    return rates;
}

std::vector<double> dl_fronthaul_indep(const DlSignalPlan &plan, const QuantizationConfig &q)
{
    if (q.covariance().dim() != plan.total_cov().dim() || q.block_dim() != plan.block_dim())
        fail(ErrorCode::DimensionMismatch, "quantization covariance does not match the signal plan");
    if (q.has_cross_blocks())
        fail(ErrorCode::InvalidQuantizer, "independent compression requires uncorrelated quantization noise");
    std::vector<double> c(plan.n_ru());
    for (std::size_t j = 0; j < c.size(); ++j)
    {
        const auto qj = q.block(j);
        const double lq = logdet2_quantizer(qj);
        c[j] = std::max(0.0, logdet2(plan.ru_block(j) + qj) - lq);
    }
    return c;
}

std::vector<double> dl_fronthaul_multivariate(const DlSignalPlan &plan, const QuantizationConfig &q,
                                              std::span<const std::size_t> order)
{
    if (q.covariance().dim() != plan.total_cov().dim() || q.block_dim() != plan.block_dim())
        fail(ErrorCode::DimensionMismatch, "quantization covariance does not match the signal plan");
    require_permutation(order, plan.n_ru(), "encoding order");
    const auto bd = plan.block_dim();

    std::vector<double> c(plan.n_ru());
    for (std::size_t p = 0; p < order.size(); ++p)
    {
        const auto j = order[p];
        const auto qj = q.block(j);
        const double lq = logdet2_quantizer(qj);
        const double indep = std::max(0.0, logdet2(plan.ru_block(j) + qj) - lq);
        const BlockIndexSet earlier(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p)), bd);
        const auto cond = schur_conditional_cov(q.covariance(), BlockIndexSet::single(j, bd), earlier);
        const double surcharge = p == 0 ? 0.0 : std::max(0.0, lq - logdet2_quantizer(cond));
        c[j] = indep + surcharge;
    }
    return c;
}

std::vector<std::size_t> default_precoding_order(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    std::vector<double> strength(cfg.n_ue);
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
        strength[i] = ue_rows(cfg, ch, i).squaredNorm();
    std::vector<std::size_t> order(cfg.n_ue);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return strength[a] > strength[b]; });
    return order;
}

DlSignalPlan zero_forcing_plan(const ClusterConfig &cfg, const ChannelRealization &ch)
{
    const auto &h = ch.h_dl;
    const auto rx = h.rows(); // UE antennas
    const auto tx = h.cols(); // RU antennas
    const double budget = cfg.ru_power_budget();

    ComplexMatrix gram = h * h.adjoint();
    if (tx < rx)
        gram.diagonal().array() += cfg.noise_var_dl * static_cast<double>(rx) / (budget * static_cast<double>(cfg.n_ru));
    Eigen::LDLT<ComplexMatrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success)
        fail(ErrorCode::SingularMatrix, "zero-forcing Gram matrix is singular");
    const ComplexMatrix w = h.adjoint() * ldlt.solve(ComplexMatrix::Identity(rx, rx));

    const auto mu = static_cast<Eigen::Index>(cfg.ue_antennas);
    std::vector<HermitianPsd> covs;
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
    {
        const ComplexMatrix wi = w.middleCols(static_cast<Eigen::Index>(i) * mu, mu);
        covs.push_back(HermitianPsd::trusted(wi * wi.adjoint()));
    }
    DlSignalPlan raw(covs, default_precoding_order(cfg, ch), cfg.ru_antennas);
    double worst = 0.0;
    for (double p : raw.per_ru_power())
        worst = std::max(worst, p);
    if (!(worst > 0.0))
        fail(ErrorCode::SingularMatrix, "zero-forcing plan radiates no power");
    const double scale = budget / worst;
    for (auto &c : covs)
        c = c.scaled(scale);
    return {std::move(covs), raw.precoding_order(), cfg.ru_antennas};
}

RateReport evaluate_downlink(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &plan,
                             const QuantizationConfig &q, const DownlinkStrategy &strategy)
{
    if (!plan.within_budget(cfg.ru_power_budget()))
        fail(ErrorCode::PowerBudgetExceeded, "signal plan exceeds a per-RU power budget");

    RateReport rep;
    if (strategy.precoding == Precoding::linear)
    {
        rep.per_ue_rates = dl_rate_linear(cfg, ch, plan, q, strategy.noise_mode);
    }
    else
    {
        const auto &order = strategy.precoding_order.empty() ? plan.precoding_order() : strategy.precoding_order;
        rep.per_ue_rates = dl_rate_dpc(cfg, ch, plan, q, order, strategy.noise_mode);
    }

    if (strategy.compression == DownlinkCompression::independent)
    {
        rep.per_ru_fronthaul = dl_fronthaul_indep(plan, q);
    }
    else
    {
        std::vector<std::size_t> order = strategy.encoding_order;
        if (order.empty())
        {
            order.resize(cfg.n_ru);
            std::iota(order.begin(), order.end(), 0);
        }
        rep.per_ru_fronthaul = dl_fronthaul_multivariate(plan, q, order);
    }
    rep.feasible = fronthaul_feasible(rep.per_ru_fronthaul, cfg.fronthaul_caps);
    return rep;
}

} // namespace cranlab
