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

#include <string>
#include <vector>

#include <json.hpp>

namespace cranlab
{

struct CpriProfile
{
    double sample_rate = 30.72e6; // Hz per antenna-carrier
    unsigned bits_per_component = 15;
    unsigned antennas = 1;
    double control_overhead = 16.0 / 15.0;
    double line_coding = 10.0 / 8.0;

    // InvalidArgument outside 8..20 bits, without antennas, or with a factor below 1.
    void validate() const;
};

// sample_rate x 2 x bits x antennas x control overhead x line coding, in bit/s.
double cpri_line_rate(const CpriProfile &profile);

enum class SplitId
{
    l2_a,
    l2_b,
    l2_c,
    l2_d,
};

enum class SplitType
{
    synchronous,
    asynchronous,
};

struct SplitOption
{
    SplitId id;
    SplitType type;
    double max_one_way_ms;
};

struct HarqBudget
{
    double round_trip_ms = 3.0; // fronthaul round trip plus processing must stay below this
    double split_b_one_way_ms = 0.1;
};

std::vector<SplitOption> layer2_split_options(const HarqBudget &budget = {});

struct SplitFeasibility
{
    SplitOption option;
    bool feasible = false;
    double remaining_ms = 0.0; // HARQ slack for synchronous splits, latency slack otherwise
};

std::vector<SplitFeasibility> harq_budget_check(double fronthaul_one_way_ms, double processing_ms,
                                                const HarqBudget &budget = {});

inline constexpr double layer2_overhead = 0.10;

// User-plane peak rate plus the Layer-2 header overhead, in bit/s.
double split_c_bandwidth(double user_plane_peak_bps);

std::string to_string(SplitId id);
std::string to_string(SplitType type);

nlohmann::json cpri_report(const CpriProfile &profile);
nlohmann::json split_report(double fronthaul_one_way_ms, double processing_ms, const HarqBudget &budget = {});

} // namespace cranlab
