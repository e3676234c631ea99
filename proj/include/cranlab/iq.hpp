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

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace cranlab
{

using IqSample = std::complex<double>;

struct IqFrame
{
    std::vector<IqSample> samples;
    double sample_rate = 1.0; // Hz
    double full_scale = 1.0;  // bound on |Re| and |Im|

    // InvalidArgument unless sample_rate > 0 and every component lies within full_scale.
    void validate() const;
};

struct Ratio
{
    std::uint32_t num = 1;
    std::uint32_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    Ratio reduced() const;
};

inline constexpr std::uint32_t max_ratio_term = 256;

// Polyphase rational resampler with a Kaiser-windowed sinc low-pass
// (passband 0.8 of the narrower Nyquist band, >= 60 dB stopband).
// Output length is ceil(n * num / den).
IqFrame resample(const IqFrame &frame, Ratio ratio);
std::size_t resampled_length(std::size_t n, Ratio ratio);

struct BlockScaled
{
    IqFrame frame;
    std::vector<std::int8_t> exponents; // gain of block b is 2^exponents[b]
    std::size_t block_len = 1;
};

BlockScaled block_scale(const IqFrame &frame, std::size_t block_len);
IqFrame block_descale(const BlockScaled &scaled);

enum class QuantizerKind : std::uint8_t
{
    uniform = 0,
    lloyd_max = 1,
};

// Scalar quantizer on a normalized axis: thresholds are the n-1 decision
// boundaries, levels the n reconstruction points, both ascending.
struct ScalarQuantizer
{
    std::vector<double> thresholds;
    std::vector<double> levels;
    double design_mse = 0.0; // per component, in normalized units
    int iterations = 0;

    std::uint32_t index(double x) const;
    double level(std::uint32_t i) const { return levels[i]; }
    std::size_t size() const { return levels.size(); }
};

inline constexpr unsigned max_lloyd_max_bits = 8;

// Lloyd-Max design for a unit-variance Gaussian source, iterated until no
// level moves by more than 1e-9.
ScalarQuantizer lloyd_max_design(unsigned bits);
// Midrise uniform quantizer covering [-1, 1] with 2^bits levels.
ScalarQuantizer uniform_design(unsigned bits);

// Canonical prefix code over symbols 0..alphabet-1.
struct PrefixCode
{
    std::vector<std::uint8_t> lengths; // 0 for unused symbols
    std::vector<std::uint64_t> codes;

    static PrefixCode from_counts(std::span<const std::uint64_t> counts);
    static PrefixCode from_lengths(std::vector<std::uint8_t> lengths);
    std::size_t alphabet() const { return lengths.size(); }
    double average_length(std::span<const std::uint64_t> counts) const;
};

inline constexpr unsigned max_code_length = 32;

class BitWriter
{
public:
    void put(std::uint64_t value, unsigned nbits); // MSB first
    std::uint64_t bit_count() const { return bits_; }
    const std::vector<std::uint8_t> &bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bits_ = 0;
};

class BitReader
{
public:
    BitReader(std::span<const std::uint8_t> bytes, std::uint64_t nbits) : bytes_(bytes), nbits_(nbits) {}
    // MalformedBitstream when reading past the end.
    std::uint64_t get(unsigned nbits);
    std::uint64_t remaining() const { return nbits_ - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::uint64_t nbits_;
    std::uint64_t pos_ = 0;
};

void entropy_encode(std::span<const std::uint32_t> symbols, const PrefixCode &code, BitWriter &out);
std::vector<std::uint32_t> entropy_decode(BitReader &in, std::size_t count, const PrefixCode &code);

std::vector<std::uint64_t> symbol_counts(std::span<const std::uint32_t> symbols, std::size_t alphabet);
double empirical_entropy(std::span<const std::uint32_t> symbols); // bits per symbol

struct CodecConfig
{
    Ratio resample_ratio{1, 1};
    std::size_t block_len = 32;
    QuantizerKind quantizer = QuantizerKind::lloyd_max;
    unsigned bits_per_component = 7;
    bool noise_shaping = false; // first-order predictive loop
    bool entropy_stage = true;

    // InvalidConfig on out-of-range fields; InvalidRatio on a bad ratio.
    void validate() const;
};

struct CompressedBitstream
{
    std::vector<std::uint8_t> bytes;
};

struct EncodedFrame
{
    CompressedBitstream bitstream;
    std::vector<std::uint32_t> indices; // I and Q interleaved, before the entropy stage
};

inline constexpr unsigned baseline_bits_per_component = 15;

EncodedFrame encode_frame(const IqFrame &frame, const CodecConfig &cfg);
CompressedBitstream encode(const IqFrame &frame, const CodecConfig &cfg);
// MalformedBitstream on any structural inconsistency.
IqFrame decode(const CompressedBitstream &bs);
CodecConfig bitstream_config(const CompressedBitstream &bs);

struct CodecReport
{
    std::size_t samples = 0;
    std::size_t encoded_bytes = 0;
    double bits_per_sample = 0.0;   // per original complex sample
    double compression_ratio = 0.0; // against 2 x 15 bits per original sample
    double evm = 0.0;               // rms error / rms signal
    double sqnr_db = 0.0;
    double index_entropy = 0.0;     // bits per component index
};

CodecReport measure(const IqFrame &original, const IqFrame &decoded, const EncodedFrame &encoded);
CodecReport run_codec(const IqFrame &frame, const CodecConfig &cfg);
nlohmann::json to_json(const CodecReport &report);

CodecConfig codec_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const CodecConfig &cfg);

// Band-limited complex Gaussian frame: flat spectrum over |f| <= half_bandwidth,
// per-component rms of full_scale / crest, clipped to full_scale.
IqFrame synthetic_gaussian_frame(std::size_t n, double sample_rate, double half_bandwidth, std::uint64_t seed,
                                 double full_scale = 1.0, double crest = 4.0);

// Interleaved little-endian float32 I/Q.
IqFrame read_raw_iq(const std::filesystem::path &path, double sample_rate, double full_scale);
void write_raw_iq(const std::filesystem::path &path, const IqFrame &frame);

} // namespace cranlab
