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

#include <iostream>

#include <CLI11.hpp>

#include "cranlab/errors.hpp"
#include "cranlab/experiment.hpp"

namespace
{

int exit_code(const cranlab::Error &e)
{
    switch (e.code())
    {
    case cranlab::ErrorCode::SchemaError:
    case cranlab::ErrorCode::ScenarioNotFound:
        return 2;
    default:
        return 3;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"cranlab: C-RAN experiment runner"};
    app.set_version_flag("--version", std::string(CRANLAB_VERSION));
    app.require_subcommand(1);

    std::string spec_path;
    std::size_t workers = 0;
    auto *run = app.add_subcommand("run", "Run every sweep cell and write results.csv and manifest.json");
    auto *compare = app.add_subcommand("compare", "Compare compression strategies cell by cell");
    auto *validate = app.add_subcommand("validate", "Check a spec and its scenario without running");
    for (auto *sub : {run, compare, validate})
        sub->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
    for (auto *sub : {run, compare})
        sub->add_option("-w,--workers", workers, "Worker threads (default: CRANLAB_WORKERS or all cores)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try
    {
        const auto spec = cranlab::load_experiment_spec(spec_path);
        cranlab::RunOptions opts;
        opts.workers = workers;
        if (validate->parsed())
        {
            cranlab::validate_experiment(spec);
            std::cout << "ok: " << spec_path << " (" << cranlab::to_string(spec.kind) << ")\n";
            return 0;
        }
        if (run->parsed())
        {
            const auto table = cranlab::run_experiment(spec, opts);
            std::cout << "wrote " << table.rows.size() << " rows to " << (spec.output_dir / "results.csv").string()
                      << "\n";
            return 0;
        }
        const auto table = cranlab::compare_strategies(spec, opts);
        std::cout << table.to_csv();
        std::cout << "wrote " << table.rows.size() << " rows to " << (spec.output_dir / "compare.csv").string() << "\n";
        return 0;
    }
    catch (const cranlab::Error &e)
    {
        std::cerr << "cranlab: " << e.what() << "\n";
        return exit_code(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "cranlab: " << e.what() << "\n";
        return 3;
    }
}
