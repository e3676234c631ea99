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

#include "cranlab/dimensioning.hpp"

#include <cmath>

#include "cranlab/errors.hpp"

namespace cranlab
{

void CpriProfile::validate() const
{
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        fail(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (bits_per_component < 8 || bits_per_component > 20)
        fail(ErrorCode::InvalidArgument, "bits per component must lie in 8..20");
    if (antennas < 1)
        fail(ErrorCode::InvalidArgument, "at least one antenna is required");
    if (!(control_overhead >= 1.0) || !(line_coding >= 1.0))
        fail(ErrorCode::InvalidArgument, "overhead factors must be at least 1");
}

double cpri_line_rate(const CpriProfile &profile)
{
    profile.validate();
    return profile.sample_rate * 2.0 * profile.bits_per_component * profile.antennas * profile.control_overhead *
           profile.line_coding;
}

std::vector<SplitOption> layer2_split_options(const HarqBudget &budget)
{
    return {
        {SplitId::l2_a, SplitType::synchronous, 1.0},
        {SplitId::l2_b, SplitType::synchronous, budget.split_b_one_way_ms},
        {SplitId::l2_c, SplitType::asynchronous, 20.0},
        {SplitId::l2_d, SplitType::asynchronous, 20.0},
    };
}

std::vector<SplitFeasibility> harq_budget_check(double fronthaul_one_way_ms, double processing_ms,
                                                const HarqBudget &budget)
{
    if (!(fronthaul_one_way_ms >= 0.0) || !(processing_ms >= 0.0))
        fail(ErrorCode::InvalidArgument, "latencies must be non-negative");
    if (!(budget.round_trip_ms > 0.0) || !(budget.split_b_one_way_ms > 0.0))
        fail(ErrorCode::InvalidArgument, "budgets must be positive");
    std::vector<SplitFeasibility> out;
    for (const auto &opt : layer2_split_options(budget))
    {
        SplitFeasibility f{opt, false, 0.0};
        const bool within_split = fronthaul_one_way_ms <= opt.max_one_way_ms;
        if (opt.type == SplitType::synchronous)
        {
            f.remaining_ms = budget.round_trip_ms - (2.0 * fronthaul_one_way_ms + processing_ms);
            f.feasible = within_split && f.remaining_ms > 0.0;
        }
        else
        {
            f.remaining_ms = opt.max_one_way_ms - fronthaul_one_way_ms;
            f.feasible = within_split;
        }
        out.push_back(f);
    }
    return out;
}

double split_c_bandwidth(double user_plane_peak_bps)
{
    if (!(user_plane_peak_bps > 0.0) || !std::isfinite(user_plane_peak_bps))
        fail(ErrorCode::InvalidArgument, "user-plane peak rate must be positive");
    return user_plane_peak_bps * (1.0 + layer2_overhead);
}

std::string to_string(SplitId id)
{
    switch (id)
    {
    case SplitId::l2_a:
        return "L2_A";
    case SplitId::l2_b:
        return "L2_B";
    case SplitId::l2_c:
        return "L2_C";
    case SplitId::l2_d:
        return "L2_D";
    }
    return "unknown";
}

std::string to_string(SplitType type) { return type == SplitType::synchronous ? "synchronous" : "asynchronous"; }

nlohmann::json cpri_report(const CpriProfile &profile)
{
    const double rate = cpri_line_rate(profile);
    return {{"sample_rate_hz", profile.sample_rate},
            {"bits_per_component", profile.bits_per_component},
            {"antennas", profile.antennas},
            {"control_overhead", profile.control_overhead},
            {"line_coding", profile.line_coding},
            {"line_rate_bps", rate},
            {"line_rate_gbps", rate / 1e9}};
}

nlohmann::json split_report(double fronthaul_one_way_ms, double processing_ms, const HarqBudget &budget)
{
    nlohmann::json splits = nlohmann::json::array();
    for (const auto &f : harq_budget_check(fronthaul_one_way_ms, processing_ms, budget))
        splits.push_back({{"id", to_string(f.option.id)},
                          {"type", to_string(f.option.type)},
                          {"max_one_way_ms", f.option.max_one_way_ms},
                          {"feasible", f.feasible},
                          {"remaining_ms", f.remaining_ms}});
    return {{"one_way_ms", fronthaul_one_way_ms},
            {"processing_ms", processing_ms},
            {"round_trip_budget_ms", budget.round_trip_ms},
            {"splits", splits}};
}

} // namespace cranlab
