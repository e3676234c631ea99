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

#include "cranlab/dl_joint.hpp"

#include <algorithm>

#include "cranlab/errors.hpp"
#include "cranlab/quantizer_design.hpp"

namespace cranlab
{

namespace
{

struct Candidate
{
    DlSignalPlan plan;
    QuantizationConfig q;
    std::vector<double> rates;
    double objective = 0.0;
};

Candidate evaluate_weights(const ClusterConfig &cfg, const ChannelRealization &ch, const DlSignalPlan &base,
                           std::span<const double> caps, const std::vector<double> &power,
                           const std::vector<double> &ue_weights)
{
    std::vector<HermitianPsd> covs;
    for (std::size_t i = 0; i < base.n_ue(); ++i)
        covs.push_back(base.per_ue_tx_cov()[i].scaled(power[i]));
    const DlSignalPlan raw(covs, base.precoding_order(), base.block_dim());
    const auto powers = raw.per_ru_power();
    const double worst = *std::max_element(powers.begin(), powers.end());
    const double scale = cfg.ru_power_budget() / worst;
    for (auto &c : covs)
        c = c.scaled(scale);

    Candidate out{DlSignalPlan(std::move(covs), base.precoding_order(), base.block_dim()), {}, {}, 0.0};
    out.q = fit_all_to_caps(cfg, ch, caps, FronthaulLink::dl_indep, {}, &out.plan).q;
    out.rates = dl_rate_linear(cfg, ch, out.plan, out.q);
    for (std::size_t i = 0; i < out.rates.size(); ++i)
        out.objective += ue_weights[i] * out.rates[i];
    return out;
}

} // namespace

JointDesignResult joint_design_heuristic(const ClusterConfig &cfg, const ChannelRealization &ch,
                                         std::span<const double> caps, const JointDesignOptions &options)
{
    if (caps.size() != cfg.n_ru)
        fail(ErrorCode::DimensionMismatch, "one cap per RU is required");
    std::vector<double> ue_weights = options.ue_weights;
    if (ue_weights.empty())
        ue_weights.assign(cfg.n_ue, 1.0);
    if (ue_weights.size() != cfg.n_ue)
        fail(ErrorCode::DimensionMismatch, "one weight per UE is required");
    for (double w : ue_weights)
        if (!(w >= 0.0))
            fail(ErrorCode::InvalidArgument, "UE weights must be non-negative");
    for (double f : options.step_factors)
        if (!(f > 0.0))
            fail(ErrorCode::InvalidArgument, "step factors must be positive");

    const auto base = zero_forcing_plan(cfg, ch);
    std::vector<double> power(cfg.n_ue, 1.0);
    auto best = evaluate_weights(cfg, ch, base, caps, power, ue_weights);

    JointDesignResult result;
    result.history.push_back(best.objective);
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep)
    {
        bool moved = false;
        for (std::size_t i = 0; i < cfg.n_ue; ++i)
            for (double f : options.step_factors)
            {
                auto trial_power = power;
                trial_power[i] *= f;
                auto trial = evaluate_weights(cfg, ch, base, caps, trial_power, ue_weights);
                if (trial.objective > best.objective + 1e-12)
                {
                    best = std::move(trial);
                    power = std::move(trial_power);
                    moved = true;
                }
            }
        result.history.push_back(best.objective);
        if (!moved)
            break;
    }
    result.plan = std::move(best.plan);
    result.q = std::move(best.q);
    result.power_weights = std::move(power);
    result.rates = std::move(best.rates);
    result.objective = best.objective;
    return result;
}

} // namespace cranlab
