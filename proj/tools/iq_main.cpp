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

#include <fstream>
#include <iostream>
#include <iterator>

#include <CLI11.hpp>

#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"

namespace
{

using cranlab::ErrorCode;

int exit_code(const cranlab::Error &e)
{
    switch (e.code())
    {
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidRatio:
    case ErrorCode::InvalidArgument:
        return 2;
    default:
        return 3;
    }
}

nlohmann::json read_json(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        cranlab::fail(ErrorCode::SchemaError, "cannot open " + path);
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception &e)
    {
        cranlab::fail(ErrorCode::SchemaError, path + " is not valid JSON: " + e.what());
    }
}

void write_report(const std::string &path, const nlohmann::json &report)
{
    if (path.empty())
    {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    out << report.dump(2) << "\n";
    if (!out)
        cranlab::fail(ErrorCode::IoError, "cannot write " + path);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"iq: compressed IQ fronthaul codec"};
    app.require_subcommand(1);
    std::string config, in_path, out_path, report_path;
    double sample_rate = 15.36e6;
    double full_scale = 1.0;

    auto *enc = app.add_subcommand("encode", "Compress raw interleaved float32 IQ");
    auto *dec = app.add_subcommand("decode", "Expand a CIQ1 bitstream to raw interleaved float32 IQ");
    enc->add_option("--config", config, "Codec config (JSON)")->required();
    dec->add_option("--config", config, "Expected codec config (JSON); checked against the bitstream");
    for (auto *sub : {enc, dec})
    {
        sub->add_option("--in", in_path, "Input file")->required();
        sub->add_option("--out", out_path, "Output file")->required();
        sub->add_option("--report", report_path, "Report file (JSON); stdout when omitted");
    }
    enc->add_option("--sample-rate", sample_rate, "Input sample rate in Hz");
    enc->add_option("--full-scale", full_scale, "Full-scale amplitude per component");

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
        if (enc->parsed())
        {
            const auto cfg = cranlab::codec_config_from_json(read_json(config));
            const auto frame = cranlab::read_raw_iq(in_path, sample_rate, full_scale);
            const auto encoded = cranlab::encode_frame(frame, cfg);
            {
                std::ofstream out(out_path, std::ios::binary);
                out.write(reinterpret_cast<const char *>(encoded.bitstream.bytes.data()),
                          static_cast<std::streamsize>(encoded.bitstream.bytes.size()));
                if (!out)
                    cranlab::fail(ErrorCode::IoError, "cannot write " + out_path);
            }
            const auto report = cranlab::measure(frame, cranlab::decode(encoded.bitstream), encoded);
            auto j = cranlab::to_json(report);
            j["config"] = cranlab::to_json(cfg);
            write_report(report_path, j);
            return 0;
        }

        std::ifstream in(in_path, std::ios::binary);
        if (!in)
            cranlab::fail(ErrorCode::IoError, "cannot open " + in_path);
        cranlab::CompressedBitstream bs;
        bs.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        const auto frame = cranlab::decode(bs);
        const auto cfg = cranlab::bitstream_config(bs);
        if (!config.empty() && cranlab::to_json(cranlab::codec_config_from_json(read_json(config))) !=
                                   cranlab::to_json(cfg))
            cranlab::fail(ErrorCode::InvalidConfig, "bitstream was encoded with a different config");
        cranlab::write_raw_iq(out_path, frame);
        write_report(report_path, {{"samples", frame.samples.size()},
                                   {"sample_rate", frame.sample_rate},
                                   {"full_scale", frame.full_scale},
                                   {"encoded_bytes", bs.bytes.size()},
                                   {"config", cranlab::to_json(cfg)}});
        return 0;
    }
    catch (const cranlab::Error &e)
    {
        std::cerr << "iq: " << e.what() << "\n";
        return exit_code(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "iq: " << e.what() << "\n";
        return 3;
    }
}
