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

#include "cranlab/quantizer_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cranlab/errors.hpp"
#include "cranlab/uplink.hpp"

namespace cranlab
{

namespace
{

constexpr int max_bisection_steps = 400;

// sum_k log2(1 + mu_k / alpha)
double shaped_cost(const Eigen::VectorXd &mu, double alpha)
{
    double acc = 0.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k)
        acc += std::log1p(mu(k) / alpha);
    return acc / std::numbers::ln2;
}

HermitianPsd conditional_wz_signal(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ru,
                                   const FitContext &ctx)
{
    auto m = received_cov_ul(cfg, ch);
    if (ctx.earlier_rus.empty())
        return principal_submatrix(m, BlockIndexSet::single(ru, cfg.ru_antennas));
    if (ctx.earlier_q == nullptr)
        fail(ErrorCode::InvalidArgument, "Wyner-Ziv fit needs the quantizers of earlier RUs");
    ComplexMatrix full = m.matrix();
    const auto d = static_cast<Eigen::Index>(cfg.ru_antennas);
    for (auto e : ctx.earlier_rus)
    {
        if (e == ru)
            fail(ErrorCode::InvalidArgument, "an RU cannot condition on itself");
        const auto off = static_cast<Eigen::Index>(e) * d;
        full.block(off, off, d, d) += ctx.earlier_q->block(e).matrix();
    }
    return schur_conditional_cov(HermitianPsd::trusted(full), BlockIndexSet::single(ru, cfg.ru_antennas),
                                 BlockIndexSet(ctx.earlier_rus, cfg.ru_antennas));
}

double joint_ul_information(const ClusterConfig &cfg, const HermitianPsd &signal, const QuantizationConfig &q)
{
    const auto noise = q.covariance().plus_identity(cfg.noise_var_ul);
    return logdet2(signal + noise) - logdet2(noise);
}

} // namespace

double uniform_rate(const UniformQuantizerModel &model)
{
    if (!(model.step > 0.0) || !(model.step <= model.full_scale) || !std::isfinite(model.full_scale))
        fail(ErrorCode::InvalidRange, "uniform quantizer needs 0 < step <= full_scale");
    return 2.0 * std::log2(model.full_scale / model.step);
}

double step_for_component_bits(double full_scale, unsigned bits)
{
    if (bits < 1 || !(full_scale > 0.0))
        fail(ErrorCode::InvalidRange, "need at least one bit and a positive full scale");
    return std::ldexp(full_scale, 1 - static_cast<int>(bits));
}

HermitianPsd uniform_noise_cov(const UniformQuantizerModel &model, std::size_t dim)
{
    if (!(model.step >= 0.0) || !std::isfinite(model.step))
        fail(ErrorCode::InvalidRange, "quantization step must be finite and non-negative");
    return HermitianPsd::identity(dim, model.step * model.step / 6.0);
}

CapFit fit_shaped_noise(const HermitianPsd &signal, const HermitianPsd &shape, double cap)
{
    if (!(cap > 0.0) || std::isnan(cap))
        fail(ErrorCode::InvalidArgument, "fronthaul cap must be positive");
    if (signal.dim() != shape.dim())
        fail(ErrorCode::DimensionMismatch, "noise shape must match the signal dimension");

    Eigen::LLT<ComplexMatrix> llt(shape.matrix());
    if (llt.info() != Eigen::Success)
        fail(ErrorCode::InvalidArgument, "noise shape must be positive definite");
    const ComplexMatrix li = llt.matrixL().solve(ComplexMatrix::Identity(shape.matrix().rows(), shape.matrix().cols()));
    Eigen::VectorXd mu = eigenvalues(HermitianPsd::trusted(li * signal.matrix() * li.adjoint()));
    mu = mu.cwiseMax(0.0);
    const double tr = mu.sum();

    CapFit fit;
    if (!(tr > 0.0))
    {
        // Nothing to compress: every noise level costs zero bits.
        fit.alpha = 1e-12 * std::max(shape.trace(), 1.0);
        fit.q = shape.scaled(fit.alpha);
        return fit;
    }

    double hi = 1e9 * tr;
    if (shaped_cost(mu, hi) > cap)
        fail(ErrorCode::CapTooSmall, "cap is below the cost of the coarsest admissible quantizer");
    double lo = tr;
    while (shaped_cost(mu, lo) < cap)
    {
        lo *= 0x1.0p-16;
        if (lo < tr * 1e-280)
        {
            fit.alpha = lo;
            fit.achieved = shaped_cost(mu, lo);
            fit.residual = std::abs(fit.achieved - cap);
            fit.q = shape.scaled(lo);
            return fit;
        }
    }

    double alpha = lo;
    double cost = shaped_cost(mu, lo);
    for (int it = 0; it < max_bisection_steps; ++it)
    {
        fit.iterations = it + 1;
        alpha = std::sqrt(lo) * std::sqrt(hi);
        cost = shaped_cost(mu, alpha);
        if (std::isnan(cost))
            fail(ErrorCode::NonMonotone, "fronthaul cost evaluation failed during bisection");
        if (std::abs(cost - cap) <= cap_fit_tolerance)
            break;
        if (cost > cap)
            lo = alpha;
        else
            hi = alpha;
        if (hi <= lo * (1.0 + 4e-16))
            break;
    }
    if (shaped_cost(mu, lo) < cost - 1e-12 || shaped_cost(mu, hi) > cost + 1e-12)
        fail(ErrorCode::NonMonotone, "fronthaul cost is not monotone in the noise level");

    fit.alpha = alpha;
    fit.achieved = cost;
    fit.residual = std::abs(cost - cap);
    fit.converged = true;
    fit.q = shape.scaled(alpha);
    return fit;
}

CapFit fit_q_to_cap_detailed(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ru, double cap,
                             FronthaulLink link, const FitContext &ctx)
{
    if (ru >= cfg.n_ru)
        fail(ErrorCode::IndexOutOfRange, "RU index out of range");
    const auto shape = HermitianPsd::identity(cfg.ru_antennas);
    switch (link)
    {
    case FronthaulLink::ul_indep:
        return fit_shaped_noise(principal_submatrix(received_cov_ul(cfg, ch), BlockIndexSet::single(ru, cfg.ru_antennas)),
                                shape, cap);
    case FronthaulLink::ul_wz:
        return fit_shaped_noise(conditional_wz_signal(cfg, ch, ru, ctx), shape, cap);
    case FronthaulLink::dl_indep:
        if (ctx.plan == nullptr)
            fail(ErrorCode::InvalidArgument, "downlink fit needs a signal plan");
        return fit_shaped_noise(ctx.plan->ru_block(ru), shape, cap);
    }
    fail(ErrorCode::InvalidArgument, "unknown fronthaul link");
}

HermitianPsd fit_q_to_cap(const ClusterConfig &cfg, const ChannelRealization &ch, std::size_t ru, double cap,
                          FronthaulLink link, const FitContext &ctx)
{
    return fit_q_to_cap_detailed(cfg, ch, ru, cap, link, ctx).q;
}

FittedQuantization fit_all_to_caps(const ClusterConfig &cfg, const ChannelRealization &ch, std::span<const double> caps,
                                   FronthaulLink link, std::span<const std::size_t> order, const DlSignalPlan *plan)
{
    if (caps.size() != cfg.n_ru)
        fail(ErrorCode::DimensionMismatch, "one cap per RU is required");
    FittedQuantization out;
    out.fits.resize(cfg.n_ru);
    std::vector<HermitianPsd> blocks(cfg.n_ru, HermitianPsd::identity(cfg.ru_antennas));

    if (link == FronthaulLink::ul_wz)
    {
        std::vector<std::size_t> seq(order.begin(), order.end());
        if (seq.empty())
            seq = default_decompression_order(cfg, ch);
        require_permutation(seq, cfg.n_ru, "decompression order");
        FitContext ctx;
        for (auto j : seq)
        {
            const auto partial = QuantizationConfig::per_ru(blocks);
            ctx.earlier_q = &partial;
            out.fits[j] = fit_q_to_cap_detailed(cfg, ch, j, caps[j], link, ctx);
            blocks[j] = out.fits[j].q;
            ctx.earlier_rus.push_back(j);
        }
    }
    else
    {
        FitContext ctx;
        ctx.plan = plan;
        for (std::size_t j = 0; j < cfg.n_ru; ++j)
        {
            out.fits[j] = fit_q_to_cap_detailed(cfg, ch, j, caps[j], link, ctx);
            blocks[j] = out.fits[j].q;
        }
    }
    out.q = QuantizationConfig::per_ru(blocks);
    return out;
}

std::vector<ProbePoint> uniform_near_optimality_probe(const ClusterConfig &cfg, const ChannelRealization &ch,
                                                      std::span<const double> caps, std::span<const double> snr_db,
                                                      const ProbeOptions &options)
{
    if (caps.size() != cfg.n_ru)
        fail(ErrorCode::DimensionMismatch, "one cap per RU is required");
    double mean_power = 0.0;
    for (const auto &s : cfg.ue_tx_cov)
        mean_power += s.trace();
    mean_power /= static_cast<double>(cfg.n_ue);

    std::vector<double> grid;
    for (double g = options.weight_min_log2; g <= options.weight_max_log2 + 1e-12; g += options.weight_step_log2)
        grid.push_back(std::exp2(g));

    const std::size_t d = cfg.ru_antennas;
    auto with_noise = [&](double noise_var) {
        ClusterConfig c = cfg;
        c.noise_var_ul = noise_var;
        c.validate();
        return c;
    };
    // Independent per-RU compression of the whole cluster is one block-diagonal source.
    auto per_ru_signal = [&](const ClusterConfig &c) {
        const auto r = received_cov_ul(c, ch);
        std::vector<HermitianPsd> blocks;
        for (std::size_t j = 0; j < c.n_ru; ++j)
            blocks.push_back(principal_submatrix(r, BlockIndexSet::single(j, d)));
        return block_diagonal(blocks);
    };

    // Quantization-to-noise ratio of the uniform design at 0 dB.
    double beta = 0.0;
    if (options.budget == ProbeBudget::noise_proportional)
    {
        const double total = std::accumulate(caps.begin(), caps.end(), 0.0);
        const auto ref = with_noise(mean_power);
        beta = fit_shaped_noise(per_ru_signal(ref), HermitianPsd::identity(cfg.ul_rx_dim()), total).alpha / mean_power;
    }

    std::vector<ProbePoint> out;
    for (double snr : snr_db)
    {
        const auto c = with_noise(mean_power / std::pow(10.0, snr / 10.0));
        const auto signal = received_signal_cov_ul(c, ch);
        const auto source = per_ru_signal(c);

        double budget = 0.0;
        if (options.budget == ProbeBudget::noise_proportional)
        {
            const auto uniform = HermitianPsd::identity(c.ul_rx_dim(), beta * c.noise_var_ul);
            budget = logdet2(source + uniform) - logdet2(uniform);
        }

        // Quantization meeting the budget with per-antenna weights w.
        auto shaped_q = [&](const std::vector<double> &w) {
            if (options.budget == ProbeBudget::noise_proportional)
            {
                const auto fit = fit_shaped_noise(source, HermitianPsd::diagonal(w), budget);
                return QuantizationConfig(fit.q, d);
            }
            std::vector<HermitianPsd> blocks;
            for (std::size_t j = 0; j < c.n_ru; ++j)
            {
                const std::span<const double> wj(w.data() + j * d, d);
                const auto rjj = principal_submatrix(source, BlockIndexSet::single(j, d));
                blocks.push_back(fit_shaped_noise(rjj, HermitianPsd::diagonal(wj), caps[j]).q);
            }
            return QuantizationConfig::per_ru(blocks);
        };

        ProbePoint pt;
        pt.snr_db = snr;
        std::vector<double> w(c.ul_rx_dim(), 1.0);
        pt.isotropic_sum_rate = joint_ul_information(c, signal, shaped_q(w));

        double best = pt.isotropic_sum_rate;
        for (int sweep = 0; sweep < options.sweeps; ++sweep)
        {
            bool improved = false;
            for (std::size_t k = 0; k < w.size(); ++k)
                for (double g : grid)
                {
                    auto trial = w;
                    trial[k] = g;
                    const double v = joint_ul_information(c, signal, shaped_q(trial));
                    if (v > best + 1e-12)
                    {
                        best = v;
                        w = std::move(trial);
                        improved = true;
                    }
                }
            if (!improved)
                break;
        }
        pt.best_diagonal_sum_rate = best;
        pt.relative_gap = best > 0.0 ? (best - pt.isotropic_sum_rate) / best : 0.0;
        for (std::size_t j = 0; j < c.n_ru; ++j)
            pt.best_shape.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(j * d),
                                       w.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
        pt.fronthaul_budget = options.budget == ProbeBudget::noise_proportional
                                  ? budget
                                  : std::accumulate(caps.begin(), caps.end(), 0.0);
        out.push_back(std::move(pt));
    }
    return out;
}

MultivariateDesign design_multivariate_q(const ClusterConfig &cfg, const ChannelRealization &ch,
                                         const DlSignalPlan &plan, std::span<const double> caps,
                                         std::span<const std::size_t> encoding_order,
                                         std::span<const double> weight_grid)
{
    if (caps.size() != cfg.n_ru)
        fail(ErrorCode::DimensionMismatch, "one cap per RU is required");
    std::vector<std::size_t> order(encoding_order.begin(), encoding_order.end());
    if (order.empty())
    {
        order.resize(cfg.n_ru);
        std::iota(order.begin(), order.end(), 0);
    }
    require_permutation(order, cfg.n_ru, "encoding order");

    static constexpr double default_grid[] = {0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
    std::vector<double> grid(weight_grid.begin(), weight_grid.end());
    if (grid.empty())
        grid.assign(std::begin(default_grid), std::end(default_grid));
    if (std::find(grid.begin(), grid.end(), 0.0) == grid.end())
        grid.insert(grid.begin(), 0.0);

    const auto n = static_cast<Eigen::Index>(cfg.ul_rx_dim());
    const auto d = static_cast<Eigen::Index>(cfg.ru_antennas);
    const ComplexMatrix pinv = ch.h_dl.completeOrthogonalDecomposition().pseudoInverse();
    const ComplexMatrix null_proj = ComplexMatrix::Identity(n, n) - pinv * ch.h_dl;

    MultivariateDesign best;
    bool have = false;
    for (double rho : grid)
    {
        if (!(rho >= 0.0 && rho < 1.0))
            fail(ErrorCode::InvalidArgument, "correlation weights must lie in [0, 1)");
        ComplexMatrix a = (1.0 - rho) * ComplexMatrix::Identity(n, n) + rho * null_proj;
        const Eigen::VectorXd inv_sqrt = a.diagonal().real().cwiseSqrt().cwiseInverse();
        const ComplexMatrix k = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
        const auto kpsd = HermitianPsd::trusted(k);

        std::vector<double> alpha(cfg.n_ru, 0.0);
        bool feasible = true;
        for (std::size_t p = 0; p < order.size() && feasible; ++p)
        {
            const auto j = order[p];
            const auto kjj = principal_submatrix(kpsd, BlockIndexSet::single(j, cfg.ru_antennas));
            const BlockIndexSet earlier(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p)),
                                        cfg.ru_antennas);
            const double surcharge =
                p == 0 ? 0.0
                       : logdet2(kjj) - logdet2(schur_conditional_cov(kpsd, BlockIndexSet::single(j, cfg.ru_antennas), earlier));
            const double budget = caps[j] - std::max(0.0, surcharge);
            if (budget <= 1e-6)
            {
                feasible = false;
                break;
            }
            alpha[j] = fit_shaped_noise(plan.ru_block(j), kjj, budget).alpha;
        }
        if (!feasible)
            continue;

        Eigen::VectorXd scale(n);
        for (std::size_t j = 0; j < cfg.n_ru; ++j)
            scale.segment(static_cast<Eigen::Index>(j) * d, d).setConstant(std::sqrt(alpha[j]));
        const QuantizationConfig q(HermitianPsd::trusted(scale.asDiagonal() * k * scale.asDiagonal()), cfg.ru_antennas);
        const auto rates = dl_rate_linear(cfg, ch, plan, q);
        const double sum = std::accumulate(rates.begin(), rates.end(), 0.0);
        if (!have || sum > best.sum_rate + 1e-12)
        {
            best.q = q;
            best.correlation = rho;
            best.sum_rate = sum;
            best.fronthaul = dl_fronthaul_multivariate(plan, q, order);
            have = true;
        }
    }
    if (!have)
        fail(ErrorCode::CapTooSmall, "no correlation weight meets the caps");
    return best;
}

} // namespace cranlab
