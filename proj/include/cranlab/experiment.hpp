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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace cranlab
{

enum class ExperimentKind
{
    ul_rates,
    dl_rates,
    quantizer_fit,
    iq_codec,
    dimensioning,
    rrm,
};

std::string to_string(ExperimentKind kind);

struct SweepAxis
{
    std::string param;
    std::vector<nlohmann::json> values;
};

struct ExperimentSpec
{
    std::filesystem::path scenario; // resolved against the spec file's directory
    ExperimentKind kind = ExperimentKind::ul_rates;
    std::vector<SweepAxis> sweep;   // first axis varies slowest
    std::vector<std::uint64_t> seeds{0};
    std::filesystem::path output_dir;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json source; // the spec as written
};

// SchemaError on structural problems, unknown parameters or ill-typed values.
ExperimentSpec parse_experiment_spec(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path &path);

// Full validation, including loading the scenario when the kind needs one.
void validate_experiment(const ExperimentSpec &spec);

struct ResultTable
{
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column_index(const std::string &name) const;
    std::vector<double> numeric_column(const std::string &name) const;
    std::string to_csv() const;
};

struct RunOptions
{
    std::size_t workers = 0; // 0 reads CRANLAB_WORKERS, falling back to the hardware concurrency
    bool write_outputs = true;
};

std::size_t workers_from_env();

// Runs every sweep cell crossed with every seed and writes results.csv and
// manifest.json under output_dir. Engine failures raise EngineError naming the cell.
ResultTable run_experiment(const ExperimentSpec &spec, const RunOptions &options = {});

// Per-cell sum-rate ratio of Wyner-Ziv over independent compression (uplink)
// or multivariate over independent compression (downlink) at equal caps.
// Writes compare.csv and compare_manifest.json.
ResultTable compare_strategies(const ExperimentSpec &spec, const RunOptions &options = {});

} // namespace cranlab
