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

#include "cranlab/rrm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "cranlab/downlink.hpp"
#include "cranlab/errors.hpp"
#include "cranlab/quantizer_design.hpp"
#include "cranlab/rng.hpp"

namespace cranlab
{

namespace
{

constexpr std::uint64_t arrival_salt = 0xa7713a15ULL;
constexpr std::uint64_t channel_salt = 0xc4a77e15ULL;

// True when (objective, size, mask) of a beats b.
bool better(const RrmAction &a, const RrmAction &b)
{
    if (a.objective < b.objective - 1e-12 * std::max(1.0, std::abs(b.objective)))
        return true;
    if (a.objective > b.objective + 1e-12 * std::max(1.0, std::abs(b.objective)))
        return false;
    if (a.active.size() != b.active.size())
        return a.active.size() < b.active.size();
    return set_to_mask(a.active) < set_to_mask(b.active);
}

} // namespace

void RrmPolicyConfig::validate(const ClusterConfig &cfg) const
{
    if (!(v >= 0.0) || !std::isfinite(v))
        fail(ErrorCode::InvalidConfig, "V must be non-negative");
    if (!(p_static >= 0.0) || (p_tx && !(*p_tx >= 0.0)))
        fail(ErrorCode::InvalidConfig, "power costs must be non-negative");
    if (horizon < 1)
        fail(ErrorCode::InvalidConfig, "horizon must be at least one frame");
    if (!(frame_bits > 0.0))
        fail(ErrorCode::InvalidConfig, "frame_bits must be positive");
    if (!arrival_bits.empty() && arrival_bits.size() != cfg.n_ue)
        fail(ErrorCode::InvalidConfig, "one arrival mean per UE is required");
    for (double a : arrival_bits)
        if (!(a >= 0.0) || !std::isfinite(a))
            fail(ErrorCode::InvalidConfig, "arrival means must be non-negative");
    if (!initial_queues.empty() && initial_queues.size() != cfg.n_ue)
        fail(ErrorCode::InvalidConfig, "one initial queue per UE is required");
    for (double q : initial_queues)
        if (!(q >= 0.0))
            fail(ErrorCode::InvalidConfig, "queues must be non-negative");
    if (cfg.n_ru > 63)
        fail(ErrorCode::InvalidConfig, "at most 63 RUs are supported");
}

std::vector<double> static_subproblem(const ClusterConfig &cfg, const ChannelRealization &ch,
                                      std::span<const std::size_t> active, std::span<const double> weights,
                                      const RrmPolicyConfig &policy)
{
    if (active.empty())
        return std::vector<double>(cfg.n_ue, 0.0);
    const auto sub = restrict_to_rus(cfg, ch, active);
    if (policy.link == RrmLink::downlink)
    {
        const auto plan = zero_forcing_plan(sub.cfg, sub.channel);
        const auto fit = fit_all_to_caps(sub.cfg, sub.channel, sub.cfg.fronthaul_caps, FronthaulLink::dl_indep, {}, &plan);
        return dl_rate_linear(sub.cfg, sub.channel, plan, fit.q);
    }
    const auto fit = fit_all_to_caps(sub.cfg, sub.channel, sub.cfg.fronthaul_caps, FronthaulLink::ul_indep);
    if (policy.receiver == Receiver::linear)
        return ul_rate_linear(sub.cfg, sub.channel, fit.q);
    if (weights.size() != cfg.n_ue)
        fail(ErrorCode::DimensionMismatch, "one weight per UE is required");
    // Heaviest weight decoded last, where it sees no interference.
    std::vector<std::size_t> order(cfg.n_ue);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return weights[a] < weights[b]; });
    return ul_rate_sic(sub.cfg, sub.channel, fit.q, order);
}

double activation_cost(const ClusterConfig &cfg, std::size_t n_active, const RrmPolicyConfig &policy)
{
    const double p_tx = policy.p_tx.value_or(cfg.ru_power_budget());
    return static_cast<double>(n_active) * (policy.p_static + p_tx);
}

RrmAction evaluate_action(const ClusterConfig &cfg, const RrmState &state, std::span<const std::size_t> active,
                          const RrmPolicyConfig &policy)
{
    if (state.queues.size() != cfg.n_ue)
        fail(ErrorCode::DimensionMismatch, "one queue per UE is required");
    RrmAction a;
    a.active.assign(active.begin(), active.end());
    a.rates = static_subproblem(cfg, state.channel, active, state.queues, policy);
    a.cost = activation_cost(cfg, active.size(), policy);
    double drift = 0.0;
    for (std::size_t i = 0; i < cfg.n_ue; ++i)
        drift -= state.queues[i] * a.rates[i];
    a.objective = drift + policy.v * a.cost;
    return a;
}

std::vector<std::size_t> mask_to_set(std::uint64_t mask)
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; mask != 0; ++j, mask >>= 1)
        if (mask & 1U)
            out.push_back(j);
    return out;
}

std::uint64_t set_to_mask(std::span<const std::size_t> active)
{
    std::uint64_t m = 0;
    for (auto j : active)
    {
        if (j >= 64)
            fail(ErrorCode::IndexOutOfRange, "RU index too large for an activation mask");
        m |= std::uint64_t{1} << j;
    }
    return m;
}

RrmAction choose_action_exhaustive(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy)
{
    if (cfg.n_ru > 20)
        fail(ErrorCode::InvalidConfig, "exhaustive activation search is limited to 20 RUs");
    RrmAction best = evaluate_action(cfg, state, {}, policy);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cfg.n_ru); ++mask)
    {
        const auto set = mask_to_set(mask);
        auto a = evaluate_action(cfg, state, set, policy);
        if (better(a, best))
            best = std::move(a);
    }
    return best;
}

RrmAction choose_action_greedy(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy)
{
    RrmAction best = evaluate_action(cfg, state, {}, policy);
    std::vector<std::size_t> current;
    for (;;)
    {
        std::optional<RrmAction> step;
        for (std::size_t j = 0; j < cfg.n_ru; ++j)
        {
            if (std::find(current.begin(), current.end(), j) != current.end())
                continue;
            auto trial = current;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), j), j);
            auto a = evaluate_action(cfg, state, trial, policy);
            if (!step || better(a, *step))
                step = std::move(a);
        }
        if (!step || !better(*step, best))
            break;
        best = *step;
        current = step->active;
    }
    return best;
}

RrmAction choose_action(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy)
{
    return cfg.n_ru <= policy.exhaustive_limit ? choose_action_exhaustive(cfg, state, policy)
                                               : choose_action_greedy(cfg, state, policy);
}

std::vector<double> update_queues(std::span<const double> queues, std::span<const double> rates,
                                  std::span<const double> arrivals, double frame_bits)
{
    if (rates.size() != queues.size() || (!arrivals.empty() && arrivals.size() != queues.size()))
        fail(ErrorCode::DimensionMismatch, "queues, rates and arrivals must align");
    std::vector<double> next(queues.size());
    for (std::size_t i = 0; i < queues.size(); ++i)
        next[i] = std::max(queues[i] - rates[i] * frame_bits, 0.0) + (arrivals.empty() ? 0.0 : arrivals[i]);
    return next;
}

RrmStepResult lyapunov_step(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy,
                            std::span<const double> arrivals)
{
    RrmStepResult r;
    r.action = choose_action(cfg, state, policy);
    r.next_queues = update_queues(state.queues, r.action.rates, arrivals, policy.frame_bits);
    return r;
}

RrmTrace run_rrm(const ClusterConfig &cfg, DuplexMode duplex, const RrmPolicyConfig &policy, std::uint64_t seed)
{
    cfg.validate();
    policy.validate(cfg);
    std::mt19937_64 gen(derive_seed(seed, arrival_salt));
    std::vector<std::poisson_distribution<long long>> arrivals;
    for (double a : policy.arrival_bits)
        arrivals.emplace_back(a > 0.0 ? a : 1.0);

    RrmState state;
    state.queues = policy.initial_queues.empty() ? std::vector<double>(cfg.n_ue, 0.0) : policy.initial_queues;
    RrmTrace trace;
    RrmSummary &s = trace.summary;
    s.mean_rates.assign(cfg.n_ue, 0.0);
    for (std::size_t t = 0; t < policy.horizon; ++t)
    {
        state.frame = t;
        const auto channel_seed = derive_seed(derive_seed(seed, channel_salt), t);
        state.channel = generate_channel(cfg, channel_seed, duplex);
        std::vector<double> a(cfg.n_ue, 0.0);
        for (std::size_t i = 0; i < policy.arrival_bits.size(); ++i)
            if (policy.arrival_bits[i] > 0.0)
                a[i] = static_cast<double>(arrivals[i](gen));
        auto step = lyapunov_step(cfg, state, policy, a);

        const double backlog = std::accumulate(state.queues.begin(), state.queues.end(), 0.0);
        s.mean_queue += backlog;
        s.mean_cost += step.action.cost;
        for (std::size_t i = 0; i < cfg.n_ue; ++i)
        {
            s.mean_rates[i] += step.action.rates[i];
            s.max_queue = std::max(s.max_queue, state.queues[i]);
        }
        trace.frames.push_back({t, channel_seed, state.queues, step.action.active, step.action.rates, step.action.cost});
        state.queues = std::move(step.next_queues);
    }
    const double n = static_cast<double>(policy.horizon);
    s.frames = policy.horizon;
    s.mean_queue /= n;
    s.mean_cost /= n;
    for (auto &r : s.mean_rates)
        r /= n;
    s.final_queues = state.queues;
    return trace;
}

std::vector<double> calibrate_arrivals(const ClusterConfig &cfg, DuplexMode duplex, const RrmPolicyConfig &policy,
                                       std::uint64_t seed, double load, std::size_t draws)
{
    if (!(load >= 0.0) || draws == 0)
        fail(ErrorCode::InvalidArgument, "load must be non-negative and draws positive");
    std::vector<std::size_t> all(cfg.n_ru);
    std::iota(all.begin(), all.end(), 0);
    const std::vector<double> equal(cfg.n_ue, 1.0);
    std::vector<double> mean(cfg.n_ue, 0.0);
    for (std::size_t d = 0; d < draws; ++d)
    {
        const auto ch = generate_channel(cfg, derive_seed(derive_seed(seed, channel_salt), d), duplex);
        const auto r = static_subproblem(cfg, ch, all, equal, policy);
        for (std::size_t i = 0; i < cfg.n_ue; ++i)
            mean[i] += r[i];
    }
    for (auto &m : mean)
        m = load * policy.frame_bits * m / static_cast<double>(draws);
    return mean;
}

bool queues_stable(const RrmTrace &trace, double tolerance)
{
    const std::size_t n = trace.frames.size();
    if (n < 4)
        return true;
    auto mean_backlog = [&](std::size_t from, std::size_t to) {
        double acc = 0.0;
        for (std::size_t t = from; t < to; ++t)
            acc += std::accumulate(trace.frames[t].queues.begin(), trace.frames[t].queues.end(), 0.0);
        return acc / static_cast<double>(to - from);
    };
    const double third = mean_backlog(n / 2, 3 * n / 4);
    const double last = mean_backlog(3 * n / 4, n);
    return last <= (1.0 + tolerance) * third + 1.0;
}

void write_trace_csv(std::ostream &out, const RrmTrace &trace)
{
    const std::size_t n_ue = trace.summary.mean_rates.size();
    out << "frame";
    for (std::size_t i = 1; i <= n_ue; ++i)
        out << ",queue_" << i;
    out << ",active_set";
    for (std::size_t i = 1; i <= n_ue; ++i)
        out << ",rate_" << i;
    out << ",cost\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    };
    for (const auto &f : trace.frames)
    {
        out << f.frame;
        for (double q : f.queues)
            out << ',' << num(q);
        out << ',';
        for (std::size_t k = 0; k < f.active.size(); ++k)
            out << (k ? "|" : "") << f.active[k];
        for (double r : f.rates)
            out << ',' << num(r);
        out << ',' << num(f.cost) << '\n';
    }
}

nlohmann::json to_json(const RrmSummary &summary)
{
    return {{"frames", summary.frames},
            {"mean_queue", summary.mean_queue},
            {"max_queue", summary.max_queue},
            {"mean_cost", summary.mean_cost},
            {"mean_rates", summary.mean_rates},
            {"final_queues", summary.final_queues}};
}

} // namespace cranlab
