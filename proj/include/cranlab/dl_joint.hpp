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

#include <span>
#include <vector>

#include "cranlab/downlink.hpp"
#include "cranlab/quantization.hpp"
#include "cranlab/scenario.hpp"

namespace cranlab
{

// Coordinate descent over per-UE power weights on zero-forcing directions,
// refitting per-RU quantizers to the caps after every move. Finds a local
// improvement over plain zero-forcing, not the optimum.
struct JointDesignOptions
{
    std::vector<double> ue_weights;                     // empty means all ones
    std::vector<double> step_factors{0.5, 0.7, 1.4, 2.0};
    int max_sweeps = 10;
};

struct JointDesignResult
{
    DlSignalPlan plan;
    QuantizationConfig q;
    std::vector<double> power_weights;
    std::vector<double> rates;
    double objective = 0.0;
    std::vector<double> history; // objective after each sweep, starting with plain zero-forcing
};

JointDesignResult joint_design_heuristic(const ClusterConfig &cfg, const ChannelRealization &ch,
                                         std::span<const double> caps, const JointDesignOptions &options = {});

} // namespace cranlab
