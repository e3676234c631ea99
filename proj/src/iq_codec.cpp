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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"
#include "cranlab/rng.hpp"

namespace cranlab
{

namespace
{

constexpr char magic[4] = {'C', 'I', 'Q', '1'};
constexpr std::uint8_t flag_noise_shaping = 1;
constexpr std::uint8_t flag_entropy = 2;
constexpr std::uint8_t table_dense = 0;
constexpr std::uint8_t table_sparse = 1;
constexpr std::size_t max_samples = std::size_t{1} << 31;

class ByteWriter
{
public:
    void u8(std::uint8_t v) { out.push_back(v); }
    void u32(std::uint32_t v)
    {
        for (int s = 24; s >= 0; s -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void u64(std::uint64_t v)
    {
        for (int s = 56; s >= 0; s -= 8)
            out.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void raw(std::span<const std::uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); }

    std::vector<std::uint8_t> out;
};

class ByteReader
{
public:
    explicit ByteReader(std::span<const std::uint8_t> b) : bytes(b) {}
    std::uint8_t u8() { return take(1)[0]; }
    std::uint32_t u32()
    {
        auto b = take(4);
        return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
    }
    std::uint64_t u64()
    {
        const std::uint64_t hi = u32();
        return (hi << 32) | u32();
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::span<const std::uint8_t> take(std::size_t n)
    {
        if (n > bytes.size() - pos)
            fail(ErrorCode::MalformedBitstream, "bitstream truncated");
        auto s = bytes.subspan(pos, n);
        pos += n;
        return s;
    }

    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

const ScalarQuantizer &make_quantizer(const CodecConfig &cfg)
{
    static std::mutex mutex;
    static std::map<std::pair<QuantizerKind, unsigned>, ScalarQuantizer> cache;
    const std::lock_guard lock(mutex);
    const auto key = std::make_pair(cfg.quantizer, cfg.bits_per_component);
    auto it = cache.find(key);
    if (it == cache.end())
    {
        auto q = cfg.quantizer == QuantizerKind::lloyd_max ? lloyd_max_design(cfg.bits_per_component)
                                                           : uniform_design(cfg.bits_per_component);
        it = cache.emplace(key, std::move(q)).first;
    }
    return it->second;
}

std::complex<double> shift(std::complex<double> v, int e)
{
    return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
}

// The quantization loop shared by encoder and decoder. With `indices` empty
// on entry it quantizes `input`; otherwise it reconstructs from the given indices.
std::vector<IqSample> quantize_loop(const std::vector<IqSample> &input, std::vector<std::uint32_t> &indices,
                                    const ScalarQuantizer &quant, double scale, std::complex<double> pred,
                                    bool predictive, std::size_t n, std::size_t block_len,
                                    const std::vector<std::int8_t> &exponents)
{
    const bool encoding = indices.empty();
    if (encoding)
        indices.resize(2 * n);
    std::vector<IqSample> recon(n);
    IqSample prev{};
    for (std::size_t k = 0; k < n; ++k)
    {
        IqSample p{};
        if (predictive && k > 0)
        {
            const int de = exponents[k / block_len] - exponents[(k - 1) / block_len];
            p = pred * shift(prev, de);
        }
        if (encoding)
        {
            const IqSample d = (input[k] - p) / scale;
            indices[2 * k] = quant.index(d.real());
            indices[2 * k + 1] = quant.index(d.imag());
        }
        const IqSample q{quant.level(indices[2 * k]), quant.level(indices[2 * k + 1])};
        recon[k] = p + scale * q;
        prev = recon[k];
    }
    return recon;
}

void write_table(ByteWriter &w, const PrefixCode &code)
{
    std::size_t used = 0;
    for (auto l : code.lengths)
        used += l > 0;
    const std::size_t dense_bytes = code.alphabet();
    const std::size_t sparse_bytes = 4 + 5 * used;
    if (dense_bytes <= sparse_bytes)
    {
        w.u8(table_dense);
        w.raw(code.lengths);
    }
    else
    {
        w.u8(table_sparse);
        w.u32(static_cast<std::uint32_t>(used));
        for (std::size_t s = 0; s < code.alphabet(); ++s)
            if (code.lengths[s] > 0)
            {
                w.u32(static_cast<std::uint32_t>(s));
                w.u8(code.lengths[s]);
            }
    }
}

PrefixCode read_table(ByteReader &r, std::size_t alphabet)
{
    std::vector<std::uint8_t> lengths(alphabet, 0);
    const auto kind = r.u8();
    if (kind == table_dense)
    {
        auto b = r.take(alphabet);
        std::copy(b.begin(), b.end(), lengths.begin());
    }
    else if (kind == table_sparse)
    {
        const auto used = r.u32();
        if (used > alphabet)
            fail(ErrorCode::MalformedBitstream, "code table larger than the alphabet");
        for (std::uint32_t k = 0; k < used; ++k)
        {
            const auto s = r.u32();
            if (s >= alphabet)
                fail(ErrorCode::MalformedBitstream, "code table symbol outside the alphabet");
            lengths[s] = r.u8();
        }
    }
    else
        fail(ErrorCode::MalformedBitstream, "unknown code table format");
    return PrefixCode::from_lengths(std::move(lengths));
}

struct Header
{
    CodecConfig cfg;
    double sample_rate = 0.0;
    double full_scale = 0.0;
    float scale = 1.0F;
    std::complex<float> pred{};
    std::uint32_t original = 0;
    std::uint32_t coded = 0;
    std::uint32_t blocks = 0;
};

Header read_header(ByteReader &r)
{
    auto m = r.take(4);
    if (!std::equal(m.begin(), m.end(), magic))
        fail(ErrorCode::MalformedBitstream, "bad magic");
    Header h;
    h.cfg.resample_ratio.num = r.u32();
    h.cfg.resample_ratio.den = r.u32();
    h.cfg.block_len = r.u32();
    const auto qk = r.u8();
    if (qk > 1)
        fail(ErrorCode::MalformedBitstream, "unknown quantizer");
    h.cfg.quantizer = static_cast<QuantizerKind>(qk);
    h.cfg.bits_per_component = r.u8();
    const auto flags = r.u8();
    if (flags & ~(flag_noise_shaping | flag_entropy))
        fail(ErrorCode::MalformedBitstream, "unknown flags");
    h.cfg.noise_shaping = flags & flag_noise_shaping;
    h.cfg.entropy_stage = flags & flag_entropy;
    h.sample_rate = r.f64();
    h.full_scale = r.f64();
    h.scale = r.f32();
    const float pr = r.f32();
    const float pi = r.f32();
    h.pred = {pr, pi};
    h.original = r.u32();
    h.coded = r.u32();
    h.blocks = r.u32();
    try
    {
        h.cfg.validate();
    }
    catch (const Error &e)
    {
        fail(ErrorCode::MalformedBitstream, std::string("invalid config block: ") + e.what());
    }
    if (!(h.sample_rate > 0.0) || !(h.full_scale > 0.0) || !(h.scale > 0.0F) || !std::isfinite(h.scale) ||
        !std::isfinite(pr) || !std::isfinite(pi) || !std::isfinite(h.sample_rate) || !std::isfinite(h.full_scale))
        fail(ErrorCode::MalformedBitstream, "invalid numeric header field");
    if (h.coded != resampled_length(h.original, h.cfg.resample_ratio) ||
        h.blocks != (h.coded + h.cfg.block_len - 1) / h.cfg.block_len)
        fail(ErrorCode::MalformedBitstream, "inconsistent sample counts");
    return h;
}

} // namespace

void CodecConfig::validate() const
{
    const auto r = resample_ratio.reduced();
    if (r.num > max_ratio_term || r.den > max_ratio_term)
        fail(ErrorCode::InvalidRatio, "resampling ratio terms must not exceed 256 after reduction");
    if (bits_per_component < 1 || bits_per_component > 20)
        fail(ErrorCode::InvalidConfig, "bits per component must lie in 1..20");
    if (quantizer == QuantizerKind::lloyd_max && bits_per_component > max_lloyd_max_bits)
        fail(ErrorCode::InvalidConfig, "Lloyd-Max quantizer supports at most 8 bits per component");
    if (block_len < 1 || block_len > 0xFFFFFFFFULL)
        fail(ErrorCode::InvalidConfig, "block length must be at least 1");
}

EncodedFrame encode_frame(const IqFrame &frame, const CodecConfig &cfg)
{
    cfg.validate();
    frame.validate();
    if (frame.samples.size() >= max_samples)
        fail(ErrorCode::InvalidArgument, "frame too long");

    const auto ratio = cfg.resample_ratio.reduced();
    const auto coded = resample(frame, ratio);
    const auto scaled = block_scale(coded, cfg.block_len);
    const std::size_t n = scaled.frame.samples.size();
    const auto &quant = make_quantizer(cfg);

    float scale = static_cast<float>(frame.full_scale);
    if (cfg.quantizer == QuantizerKind::lloyd_max)
    {
        double power = 0.0;
        for (const auto &s : scaled.frame.samples)
            power += std::norm(s);
        const double rms = n > 0 ? std::sqrt(power / (2.0 * static_cast<double>(n))) : 0.0;
        scale = rms > 0.0 ? static_cast<float>(rms) : 1.0F;
    }
    std::complex<float> pred{};
    if (cfg.noise_shaping && n > 1)
    {
        IqSample num{};
        double den = 0.0;
        for (std::size_t k = 1; k < n; ++k)
        {
            num += coded.samples[k] * std::conj(coded.samples[k - 1]);
            den += std::norm(coded.samples[k - 1]);
        }
        if (den > 0.0)
            pred = std::complex<float>(num / den);
    }

    EncodedFrame out;
    quantize_loop(scaled.frame.samples, out.indices, quant, scale, std::complex<double>(pred), cfg.noise_shaping, n,
                  cfg.block_len, scaled.exponents);

    ByteWriter w;
    w.raw({reinterpret_cast<const std::uint8_t *>(magic), 4});
    w.u32(ratio.num);
    w.u32(ratio.den);
    w.u32(static_cast<std::uint32_t>(cfg.block_len));
    w.u8(static_cast<std::uint8_t>(cfg.quantizer));
    w.u8(static_cast<std::uint8_t>(cfg.bits_per_component));
    w.u8(static_cast<std::uint8_t>((cfg.noise_shaping ? flag_noise_shaping : 0) | (cfg.entropy_stage ? flag_entropy : 0)));
    w.f64(frame.sample_rate);
    w.f64(frame.full_scale);
    w.f32(scale);
    w.f32(pred.real());
    w.f32(pred.imag());
    w.u32(static_cast<std::uint32_t>(frame.samples.size()));
    w.u32(static_cast<std::uint32_t>(n));
    w.u32(static_cast<std::uint32_t>(scaled.exponents.size()));
    for (auto e : scaled.exponents)
        w.u8(static_cast<std::uint8_t>(e));

    BitWriter bits;
    if (cfg.entropy_stage)
    {
        const auto code = PrefixCode::from_counts(symbol_counts(out.indices, quant.size()));
        write_table(w, code);
        entropy_encode(out.indices, code, bits);
    }
    else
    {
        for (auto i : out.indices)
            bits.put(i, cfg.bits_per_component);
    }
    w.u64(bits.bit_count());
    w.raw(bits.bytes());
    w.u32(static_cast<std::uint32_t>(w.out.size() + 4));
    out.bitstream.bytes = std::move(w.out);
    return out;
}

CompressedBitstream encode(const IqFrame &frame, const CodecConfig &cfg) { return encode_frame(frame, cfg).bitstream; }

CodecConfig bitstream_config(const CompressedBitstream &bs)
{
    ByteReader r(bs.bytes);
    return read_header(r).cfg;
}

IqFrame decode(const CompressedBitstream &bs)
{
    if (bs.bytes.size() < 8)
        fail(ErrorCode::MalformedBitstream, "bitstream truncated");
    const std::span<const std::uint8_t> all(bs.bytes);
    ByteReader trailer(all.last(4));
    if (trailer.u32() != bs.bytes.size())
        fail(ErrorCode::MalformedBitstream, "length trailer mismatch");

    ByteReader r(all.first(all.size() - 4));
    const auto h = read_header(r);
    std::vector<std::int8_t> exponents(h.blocks);
    auto eb = r.take(h.blocks);
    std::transform(eb.begin(), eb.end(), exponents.begin(), [](std::uint8_t b) { return static_cast<std::int8_t>(b); });
    for (auto e : exponents)
        if (e < -127)
            fail(ErrorCode::MalformedBitstream, "block exponent out of range");

    const auto &quant = make_quantizer(h.cfg);
    PrefixCode code;
    if (h.cfg.entropy_stage)
        code = read_table(r, quant.size());
    const auto nbits = r.u64();
    if (nbits > 8 * static_cast<std::uint64_t>(r.bytes.size() - r.pos))
        fail(ErrorCode::MalformedBitstream, "payload shorter than declared");
    const auto payload = r.take(static_cast<std::size_t>((nbits + 7) / 8));
    if (r.pos != r.bytes.size())
        fail(ErrorCode::MalformedBitstream, "trailing bytes after payload");

    BitReader bits(payload, nbits);
    const std::size_t n = h.coded;
    std::vector<std::uint32_t> indices;
    if (h.cfg.entropy_stage)
        indices = entropy_decode(bits, 2 * n, code);
    else
    {
        indices.reserve(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k)
            indices.push_back(static_cast<std::uint32_t>(bits.get(h.cfg.bits_per_component)));
    }
    if (bits.remaining() != 0)
        fail(ErrorCode::MalformedBitstream, "unused payload bits");

    std::vector<IqSample> recon;
    if (n > 0)
        recon = quantize_loop({}, indices, quant, static_cast<double>(h.scale), std::complex<double>(h.pred),
                              h.cfg.noise_shaping, n, h.cfg.block_len, exponents);

    BlockScaled scaled;
    scaled.frame.samples = std::move(recon);
    scaled.frame.sample_rate = h.sample_rate * h.cfg.resample_ratio.value();
    scaled.frame.full_scale = h.full_scale;
    scaled.exponents = std::move(exponents);
    scaled.block_len = h.cfg.block_len;
    const auto coded = block_descale(scaled);

    const Ratio back{h.cfg.resample_ratio.den, h.cfg.resample_ratio.num};
    auto out = resample(coded, back);
    out.sample_rate = h.sample_rate;
    out.samples.resize(h.original);
    for (auto &s : out.samples)
        s = {std::clamp(s.real(), -h.full_scale, h.full_scale), std::clamp(s.imag(), -h.full_scale, h.full_scale)};
    return out;
}

CodecReport measure(const IqFrame &original, const IqFrame &decoded, const EncodedFrame &encoded)
{
    if (original.samples.size() != decoded.samples.size())
        fail(ErrorCode::DimensionMismatch, "decoded frame length differs from the original");
    CodecReport rep;
    rep.samples = original.samples.size();
    rep.encoded_bytes = encoded.bitstream.bytes.size();
    const double bits = 8.0 * static_cast<double>(rep.encoded_bytes);
    const double n = static_cast<double>(rep.samples);
    rep.bits_per_sample = n > 0 ? bits / n : 0.0;
    rep.compression_ratio = bits > 0 ? n * 2.0 * baseline_bits_per_component / bits : 0.0;
    double err = 0.0, sig = 0.0;
    for (std::size_t k = 0; k < rep.samples; ++k)
    {
        err += std::norm(original.samples[k] - decoded.samples[k]);
        sig += std::norm(original.samples[k]);
    }
    rep.evm = sig > 0.0 ? std::sqrt(err / sig) : 0.0;
    rep.sqnr_db = err > 0.0 ? 10.0 * std::log10(sig / err) : std::numeric_limits<double>::infinity();
    rep.index_entropy = empirical_entropy(encoded.indices);
    return rep;
}

CodecReport run_codec(const IqFrame &frame, const CodecConfig &cfg)
{
    const auto enc = encode_frame(frame, cfg);
    return measure(frame, decode(enc.bitstream), enc);
}

nlohmann::json to_json(const CodecReport &report)
{
    return {{"samples", report.samples},
            {"encoded_bytes", report.encoded_bytes},
            {"bits_per_sample", report.bits_per_sample},
            {"baseline_bits_per_component", baseline_bits_per_component},
            {"compression_ratio", report.compression_ratio},
            {"evm", report.evm},
            {"sqnr_db", std::isfinite(report.sqnr_db) ? nlohmann::json(report.sqnr_db) : nlohmann::json(nullptr)},
            {"index_entropy", report.index_entropy}};
}

CodecConfig codec_config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        fail(ErrorCode::SchemaError, "codec config must be a JSON object");
    CodecConfig cfg;
    try
    {
        for (const auto &[key, value] : j.items())
        {
            if (key == "resample_ratio")
            {
                if (!value.is_array() || value.size() != 2)
                    fail(ErrorCode::SchemaError, "resample_ratio must be [num, den]");
                cfg.resample_ratio = {value[0].get<std::uint32_t>(), value[1].get<std::uint32_t>()};
            }
            else if (key == "block_len")
                cfg.block_len = value.get<std::size_t>();
            else if (key == "quantizer")
            {
                const auto s = value.get<std::string>();
                if (s == "uniform")
                    cfg.quantizer = QuantizerKind::uniform;
                else if (s == "lloyd_max")
                    cfg.quantizer = QuantizerKind::lloyd_max;
                else
                    fail(ErrorCode::SchemaError, "quantizer must be uniform or lloyd_max");
            }
            else if (key == "bits_per_component")
                cfg.bits_per_component = value.get<unsigned>();
            else if (key == "noise_shaping")
                cfg.noise_shaping = value.get<bool>();
            else if (key == "entropy_stage")
                cfg.entropy_stage = value.get<bool>();
            else
                fail(ErrorCode::SchemaError, "unknown codec config field '" + key + "'");
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        fail(ErrorCode::SchemaError, e.what());
    }
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const CodecConfig &cfg)
{
    return {{"resample_ratio", {cfg.resample_ratio.num, cfg.resample_ratio.den}},
            {"block_len", cfg.block_len},
            {"quantizer", cfg.quantizer == QuantizerKind::uniform ? "uniform" : "lloyd_max"},
            {"bits_per_component", cfg.bits_per_component},
            {"noise_shaping", cfg.noise_shaping},
            {"entropy_stage", cfg.entropy_stage}};
}

IqFrame synthetic_gaussian_frame(std::size_t n, double sample_rate, double half_bandwidth, std::uint64_t seed,
                                 double full_scale, double crest)
{
    if (n == 0 || !(sample_rate > 0.0) || !(half_bandwidth > 0.0) || !(full_scale > 0.0) || !(crest > 0.0))
        fail(ErrorCode::InvalidArgument, "synthetic frame parameters must be positive");
    const CounterRng rng(seed, 0x1a5e);
    auto *buf = static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * n));
    std::size_t active = 0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double f = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) *
                         sample_rate / static_cast<double>(n);
        Complex v{};
        if (std::abs(f) <= half_bandwidth)
        {
            v = rng.complex_normal(k, 1.0);
            ++active;
        }
        buf[k][0] = v.real();
        buf[k][1] = v.imag();
    }
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    IqFrame frame;
    frame.sample_rate = sample_rate;
    frame.full_scale = full_scale;
    frame.samples.resize(n);
    double power = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        frame.samples[k] = {buf[k][0], buf[k][1]};
        power += std::norm(frame.samples[k]);
    }
    fftw_free(buf);
    const double rms = std::sqrt(power / (2.0 * static_cast<double>(n)));
    const double gain = rms > 0.0 ? full_scale / (crest * rms) : 0.0;
    for (auto &s : frame.samples)
        s = {std::clamp(s.real() * gain, -full_scale, full_scale), std::clamp(s.imag() * gain, -full_scale, full_scale)};
    return frame;
}

IqFrame read_raw_iq(const std::filesystem::path &path, double sample_rate, double full_scale)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::IoError, "cannot open " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0)
        fail(ErrorCode::InvalidArgument, "raw IQ file size is not a multiple of 8 bytes");
    IqFrame frame;
    frame.sample_rate = sample_rate;
    frame.full_scale = full_scale;
    frame.samples.resize(bytes.size() / 8);
    for (std::size_t k = 0; k < frame.samples.size(); ++k)
    {
        std::uint32_t w[2];
        std::memcpy(w, bytes.data() + 8 * k, 8);
        if constexpr (std::endian::native == std::endian::big)
        {
            w[0] = __builtin_bswap32(w[0]);
            w[1] = __builtin_bswap32(w[1]);
        }
        frame.samples[k] = {std::bit_cast<float>(w[0]), std::bit_cast<float>(w[1])};
    }
    return frame;
}

void write_raw_iq(const std::filesystem::path &path, const IqFrame &frame)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::IoError, "cannot write " + path.string());
    for (const auto &s : frame.samples)
    {
        std::uint32_t w[2] = {std::bit_cast<std::uint32_t>(static_cast<float>(s.real())),
                              std::bit_cast<std::uint32_t>(static_cast<float>(s.imag()))};
        if constexpr (std::endian::native == std::endian::big)
        {
            w[0] = __builtin_bswap32(w[0]);
            w[1] = __builtin_bswap32(w[1]);
        }
        out.write(reinterpret_cast<const char *>(w), 8);
    }
    if (!out)
        fail(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace cranlab
