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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "cranlab/scenario.hpp"
#include "cranlab/uplink.hpp"

namespace cranlab
{

enum class RrmLink
{
    uplink,
    downlink,
};

struct RrmPolicyConfig
{
    double v = 1.0;
    double p_static = 1.0;               // per active RU
    std::optional<double> p_tx;          // per active RU; default ru_power_per_antenna * M_R
    std::vector<double> arrival_bits;    // Poisson mean per UE and frame; empty means none
    std::vector<double> initial_queues;  // empty means zero
    std::size_t horizon = 100;
    double frame_bits = 100.0;           // bits served per frame per bit/s/Hz
    RrmLink link = RrmLink::uplink;
    Receiver receiver = Receiver::linear;
    std::size_t exhaustive_limit = 6;    // enumerate all activation sets up to this many RUs

    void validate(const ClusterConfig &cfg) const;
};

struct RrmState
{
    std::size_t frame = 0;
    ChannelRealization channel;
    std::vector<double> queues;
};

struct RrmAction
{
    std::vector<std::size_t> active; // ascending RU indices
    std::vector<double> rates;       // bits/s/Hz per UE
    double cost = 0.0;               // g(t)
    double objective = 0.0;          // -sum Q_i r_i + V g
};

// Per-UE rates on the channel restricted to `active`, with quantizers fitted
// to the active RUs' caps. Weights order the SIC decoding when used.
std::vector<double> static_subproblem(const ClusterConfig &cfg, const ChannelRealization &ch,
                                      std::span<const std::size_t> active, std::span<const double> weights,
                                      const RrmPolicyConfig &policy);

double activation_cost(const ClusterConfig &cfg, std::size_t n_active, const RrmPolicyConfig &policy);

RrmAction evaluate_action(const ClusterConfig &cfg, const RrmState &state, std::span<const std::size_t> active,
                          const RrmPolicyConfig &policy);

std::vector<std::size_t> mask_to_set(std::uint64_t mask);
std::uint64_t set_to_mask(std::span<const std::size_t> active);

// Minimizes the drift-plus-penalty objective over activation sets: exhaustive
// up to the limit, greedy add-one beyond. Ties prefer fewer RUs, then the lower mask.
RrmAction choose_action(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy);
RrmAction choose_action_exhaustive(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy);
RrmAction choose_action_greedy(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy);

// max(Q - r * frame_bits, 0) + arrivals
std::vector<double> update_queues(std::span<const double> queues, std::span<const double> rates,
                                  std::span<const double> arrivals, double frame_bits);

struct RrmStepResult
{
    RrmAction action;
    std::vector<double> next_queues;
};

RrmStepResult lyapunov_step(const ClusterConfig &cfg, const RrmState &state, const RrmPolicyConfig &policy,
                            std::span<const double> arrivals);

struct RrmFrameRecord
{
    std::size_t frame = 0;
    std::uint64_t channel_seed = 0; // generate_channel seed of this frame
    std::vector<double> queues;     // Q(t), the state the action was chosen on
    std::vector<std::size_t> active;
    std::vector<double> rates;
    double cost = 0.0;
};

struct RrmSummary
{
    std::size_t frames = 0;
    double mean_queue = 0.0; // time average of the total backlog
    double max_queue = 0.0;  // largest single-UE backlog
    double mean_cost = 0.0;
    std::vector<double> mean_rates;
    std::vector<double> final_queues;
};

struct RrmTrace
{
    std::vector<RrmFrameRecord> frames;
    RrmSummary summary;
};

RrmTrace run_rrm(const ClusterConfig &cfg, DuplexMode duplex, const RrmPolicyConfig &policy, std::uint64_t seed);

// Arrival means at `load` times the mean full-activation rates over `draws` channel draws.
std::vector<double> calibrate_arrivals(const ClusterConfig &cfg, DuplexMode duplex, const RrmPolicyConfig &policy,
                                       std::uint64_t seed, double load, std::size_t draws = 200);

// Compares the mean total backlog of the last quarter of the trace against
// the third quarter; growth beyond (1 + tolerance) times the earlier mean plus
// one bit counts as unstable.
bool queues_stable(const RrmTrace &trace, double tolerance = 0.1);

void write_trace_csv(std::ostream &out, const RrmTrace &trace);
nlohmann::json to_json(const RrmSummary &summary);

} // namespace cranlab
