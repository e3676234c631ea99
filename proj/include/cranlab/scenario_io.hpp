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

#include <filesystem>

#include <json.hpp>

#include "cranlab/scenario.hpp"

namespace cranlab
{

inline constexpr int scenario_schema_version = 1;

struct Scenario
{
    ClusterConfig cfg;
    DuplexMode duplex = DuplexMode::tdd_reciprocal;
};

// Scenario JSON (schema_version 1):
//   n_ue, n_ru, ue_antennas, ru_antennas      counts, required
//   fronthaul_caps                            n_ru numbers, bits/s/Hz, required
//   noise_var_ul, noise_var_dl                positive numbers, default 1
//   ue_tx_cov                                 n_ue entries; a number p means p*I,
//                                             a matrix is rows of reals or [re, im] pairs;
//                                             default I / M_U
//   pathloss_db                               n_ru x n_ue, nested rows or flat
//                                             row-major list; default 0 dB
//   ru_power_per_antenna                      default 1
//   duplex                                    "tdd_reciprocal" (default) | "independent"
// Violations raise SchemaError.
Scenario scenario_from_json(const nlohmann::json &j);
nlohmann::json scenario_to_json(const Scenario &s);

// ScenarioNotFound when the file is missing.
Scenario load_scenario(const std::filesystem::path &path);
void save_scenario(const Scenario &s, const std::filesystem::path &path);

std::string to_string(DuplexMode mode);
DuplexMode duplex_from_string(const std::string &s);

} // namespace cranlab
