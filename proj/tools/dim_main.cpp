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

#include "cranlab/dimensioning.hpp"
#include "cranlab/errors.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"dim: fronthaul dimensioning"};
    app.require_subcommand(1);

    cranlab::CpriProfile prof;
    auto *cpri = app.add_subcommand("cpri", "CPRI line rate for a sampling profile");
    cpri->add_option("--samplerate", prof.sample_rate, "Sample rate per antenna-carrier in Hz")->required();
    cpri->add_option("--bits", prof.bits_per_component, "Bits per I or Q component")->required();
    cpri->add_option("--antennas", prof.antennas, "Antenna count")->required();
    cpri->add_option("--control-overhead", prof.control_overhead, "Control word overhead factor");
    cpri->add_option("--line-coding", prof.line_coding, "Line coding factor");

    double latency = 0.0, processing = 0.0, peak = 0.0;
    cranlab::HarqBudget budget;
    auto *split = app.add_subcommand("split", "Layer-2 split feasibility against the HARQ budget");
    split->add_option("--latency-ms", latency, "Fronthaul one-way latency in ms")->required();
    split->add_option("--processing-ms", processing, "Processing time in ms")->required();
    split->add_option("--round-trip-ms", budget.round_trip_ms, "HARQ round-trip budget in ms");
    split->add_option("--split-b-ms", budget.split_b_one_way_ms, "One-way latency bound for split B in ms");

    auto *overhead = app.add_subcommand("overhead", "Split C fronthaul rate for a user-plane peak rate");
    overhead->add_option("--peak-bps", peak, "User-plane peak rate in bit/s")->required();

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
        nlohmann::json out;
        if (cpri->parsed())
            out = cranlab::cpri_report(prof);
        else if (split->parsed())
            out = cranlab::split_report(latency, processing, budget);
        else
            out = {{"user_plane_peak_bps", peak},
                   {"overhead", cranlab::layer2_overhead},
                   {"fronthaul_bps", cranlab::split_c_bandwidth(peak)}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    catch (const cranlab::Error &e)
    {
        std::cerr << "dim: " << e.what() << "\n";
        return 2;
    }
}
