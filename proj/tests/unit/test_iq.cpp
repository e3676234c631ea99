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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "cranlab/iq.hpp"
#include "support/check.hpp"
#include "support/lloyd_oracle.hpp"

using namespace cranlab;
using testing::check_code;

namespace
{

std::vector<IqSample> fft(const std::vector<IqSample> &x, int sign = FFTW_FORWARD)
{
    const int n = static_cast<int>(x.size());
    std::vector<IqSample> in = x, out(x.size());
    auto *pin = reinterpret_cast<fftw_complex *>(in.data());
    auto *pout = reinterpret_cast<fftw_complex *>(out.data());
    fftw_plan p = fftw_plan_dft_1d(n, pin, pout, sign, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    return out;
}

IqFrame tone(std::size_t n, double fs, double f, double amp)
{
    IqFrame fr{{}, fs, 1.0};
    for (std::size_t k = 0; k < n; ++k)
        fr.samples.push_back(std::polar(amp, 2.0 * std::numbers::pi * f * static_cast<double>(k) / fs));
    return fr;
}

double power(std::span<const IqSample> x)
{
    double p = 0.0;
    for (const auto &s : x)
        p += std::norm(s);
    return p / static_cast<double>(x.size());
}

// White complex Gaussian noise, optionally restricted to |f| >= f_min (in
// cycles per sample) by zeroing FFT bins.
std::vector<IqSample> white(std::size_t n, std::uint64_t seed, double f_min = 0.0)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::vector<IqSample> x(n);
    for (auto &s : x)
        s = {nd(gen), nd(gen)};
    if (f_min <= 0.0)
        return x;
    auto spec = fft(x);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double f = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) /
                         static_cast<double>(n);
        if (std::abs(f) < f_min)
            spec[k] = 0.0;
    }
    auto back = fft(spec, FFTW_BACKWARD);
    for (auto &s : back)
        s /= static_cast<double>(n);
    return back;
}

IqFrame ar1_frame(std::size_t n, double rho, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5 * (1.0 - rho * rho)));
    IqFrame fr{{}, 1e6, 8.0};
    IqSample x{};
    for (std::size_t k = 0; k < n; ++k)
    {
        x = rho * x + IqSample(nd(gen), nd(gen));
        fr.samples.push_back(x);
    }
    return fr;
}

bool same_bits(const std::vector<IqSample> &a, const std::vector<IqSample> &b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(IqSample)) == 0;
}

} // namespace

TEST_CASE("identity ratio copies the input")
{
    const auto in = synthetic_gaussian_frame(1000, 15.36e6, 4.5e6, 1);
    const auto out = resample(in, {5, 5});
    CHECK(same_bits(out.samples, in.samples));
    CHECK(out.sample_rate == in.sample_rate);
}

TEST_CASE("tone amplitude survives 3/4 resampling")
{
    const double fs = 15.36e6;
    const auto in = tone(3 * 15360, fs, 1e6, 0.5);
    const auto out = resample(in, {3, 4});
    CHECK(out.sample_rate == doctest::Approx(11.52e6));
    CHECK(out.samples.size() == resampled_length(in.samples.size(), {3, 4}));
    // 11520 output samples span an integer number of tone periods.
    const std::size_t n = 11520;
    const std::vector<IqSample> mid(out.samples.begin() + 11520, out.samples.begin() + 11520 + n);
    const auto spec = fft(mid);
    const double amp = std::abs(spec[1000]) / static_cast<double>(n);
    const double db = 20.0 * std::log10(amp / 0.5);
    MESSAGE("tone gain " << db << " dB");
    CHECK(std::abs(db) <= 0.1);
}

TEST_CASE("passband ripple and stopband rejection")
{
    const std::size_t n = 1 << 15;
    // In-band white noise keeps its power.
    {
        auto x = white(n, 1);
        auto spec = fft(x);
        for (std::size_t k = 0; k < n; ++k)
        {
            const double f = (k <= n / 2 ? double(k) : double(k) - double(n)) / double(n);
            if (std::abs(f) > 0.25)
                spec[k] = 0.0;
        }
        x = fft(spec, FFTW_BACKWARD);
        for (auto &s : x)
            s /= double(n);
        const IqFrame in{x, 1.0, 100.0};
        const auto out = resample(in, {3, 4});
        const std::span<const IqSample> core(out.samples.data() + 2000, out.samples.size() - 4000);
        const double db = 10.0 * std::log10(power(core) / power(std::span<const IqSample>(x).subspan(2000, n - 4000)));
        MESSAGE("in-band power change " << db << " dB");
        CHECK(std::abs(db) < 0.1);
    }
    // Content above the new Nyquist frequency is rejected.
    {
        const auto x = white(n, 2, 0.375);
        const IqFrame in{x, 1.0, 100.0};
        const auto out = resample(in, {3, 4});
        const std::span<const IqSample> core(out.samples.data() + 2000, out.samples.size() - 4000);
        const double db = 10.0 * std::log10(power(core) / power(x));
        MESSAGE("out-of-band rejection " << -db << " dB");
        CHECK(db <= -40.0);
    }
}

TEST_CASE("resample ratio validation")
{
    const auto in = tone(64, 1.0, 0.1, 0.5);
    check_code(ErrorCode::InvalidRatio, [&] { resample(in, {0, 3}); });
    check_code(ErrorCode::InvalidRatio, [&] { resample(in, {3, 0}); });
    check_code(ErrorCode::InvalidRatio, [&] { resample(in, {257, 256}); });
    CHECK_NOTHROW(resample(in, {512, 256}));
    CHECK(Ratio{6, 8}.reduced().num == 3);
    CHECK(Ratio{6, 8}.reduced().den == 4);
    CHECK(resampled_length(10, {3, 4}) == 8);
    CHECK(resampled_length(12, {3, 4}) == 9);
}

TEST_CASE("block scaling examples")
{
    IqFrame fr{{}, 1.0, 1.0};
    for (int k = 0; k < 4; ++k)
        fr.samples.emplace_back(0.25, -0.25);
    for (int k = 0; k < 4; ++k)
        fr.samples.emplace_back(k == 1 ? 0.9 : 0.1, 0.2);
    for (int k = 0; k < 4; ++k)
        fr.samples.emplace_back(0.0, 0.0);
    fr.samples.emplace_back(0.5, 0.0);
    const auto s = block_scale(fr, 4);
    REQUIRE(s.exponents.size() == 4);
    CHECK(s.exponents[0] == 2);
    CHECK(s.frame.samples[0] == IqSample(1.0, -1.0));
    CHECK(s.exponents[1] == 0);
    CHECK(s.exponents[2] == 0);
    CHECK(s.exponents[3] == 1);
    CHECK(s.frame.samples[12] == IqSample(1.0, 0.0));
}

TEST_CASE("block peaks land in the upper octave and scaling inverts exactly")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> mag(-20.0, 0.0);
    for (int t = 0; t < 50; ++t)
    {
        IqFrame fr{{}, 1.0, 2.0};
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int b = 0; b < 20; ++b)
        {
            const double g = std::exp2(mag(gen));
            for (int k = 0; k < 7; ++k)
                fr.samples.emplace_back(std::clamp(g * nd(gen), -2.0, 2.0), std::clamp(g * nd(gen), -2.0, 2.0));
        }
        const auto s = block_scale(fr, 7);
        for (std::size_t b = 0; b < s.exponents.size(); ++b)
        {
            double peak = 0.0;
            for (std::size_t k = b * 7; k < std::min(fr.samples.size(), (b + 1) * 7); ++k)
                peak = std::max({peak, std::abs(s.frame.samples[k].real()), std::abs(s.frame.samples[k].imag())});
            CHECK(peak > 1.0);
            CHECK(peak <= 2.0);
        }
        CHECK(same_bits(block_descale(s).samples, fr.samples));
    }
}

TEST_CASE("Lloyd-Max designs")
{
    const auto one = lloyd_max_design(1);
    REQUIRE(one.size() == 2);
    CHECK(std::abs(one.levels[1] - std::sqrt(2.0 / std::numbers::pi)) < 1e-4);
    CHECK(one.levels[0] == -one.levels[1]);
    CHECK(one.design_mse == doctest::Approx(1.0 - 2.0 / std::numbers::pi).epsilon(1e-6));

    const auto two = lloyd_max_design(2);
    const auto oracle = oracle::grid_lloyd(2);
    CHECK(std::abs(two.design_mse - oracle.mse) < 1e-3);
    CHECK(std::abs(two.design_mse - 0.1175) < 1e-3);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(two.levels[k] - oracle.levels[k]) < 1e-3);

    for (unsigned b = 1; b <= 6; ++b)
    {
        const auto q = lloyd_max_design(b);
        REQUIRE(q.size() == (1U << b));
        REQUIRE(q.thresholds.size() == q.size() - 1);
        for (std::size_t k = 0; k < q.size(); ++k)
            CHECK(q.levels[k] == -q.levels[q.size() - 1 - k]);
        for (std::size_t k = 0; k + 1 < q.size(); ++k)
        {
            CHECK(q.levels[k] < q.levels[k + 1]);
            CHECK(q.thresholds[k] == doctest::Approx(0.5 * (q.levels[k] + q.levels[k + 1])).epsilon(1e-12));
        }
        CHECK(q.index(q.levels[0] - 10.0) == 0);
        CHECK(q.index(q.levels.back() + 10.0) == q.size() - 1);
    }
    check_code(ErrorCode::InvalidConfig, [] { lloyd_max_design(0); });
    check_code(ErrorCode::InvalidConfig, [] { lloyd_max_design(9); });
}

TEST_CASE("Lloyd-Max beats uniform quantization on Gaussian input")
{
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    for (unsigned b = 2; b <= 5; ++b)
    {
        const auto q = lloyd_max_design(b);
        double mse = 0.0;
        const int n = 200000;
        for (int k = 0; k < n; ++k)
        {
            const double x = nd(gen);
            const double e = x - q.level(q.index(x));
            mse += e * e;
        }
        mse /= n;
        CHECK(mse == doctest::Approx(q.design_mse).epsilon(0.03));
    }
}

TEST_CASE("uniform design")
{
    const auto q = uniform_design(3);
    REQUIRE(q.size() == 8);
    CHECK(q.levels.front() == doctest::Approx(-7.0 / 8.0));
    CHECK(q.levels.back() == doctest::Approx(7.0 / 8.0));
    CHECK(q.index(0.01) == 4);
    CHECK(q.index(-0.01) == 3);
    check_code(ErrorCode::InvalidConfig, [] { uniform_design(21); });
}

TEST_CASE("prefix code bounds and round trip")
{
    std::mt19937_64 gen(11);
    // Uniform symbols: length within one bit of the entropy.
    {
        std::uniform_int_distribution<std::uint32_t> u(0, 99);
        std::vector<std::uint32_t> sym(50000);
        for (auto &s : sym)
            s = u(gen);
        const auto counts = symbol_counts(sym, 100);
        const auto code = PrefixCode::from_counts(counts);
        const double h = empirical_entropy(sym);
        const double l = code.average_length(counts);
        CHECK(l >= h - 1e-12);
        CHECK(l < h + 1.0);
    }
    // Skewed sources, including one that needs the length limit.
    for (int t = 0; t < 30; ++t)
    {
        const std::size_t alphabet = 2 + static_cast<std::size_t>(gen() % 300);
        std::vector<std::uint64_t> counts(alphabet);
        for (auto &c : counts)
            c = gen() % 3 == 0 ? 0 : 1 + gen() % (1 + gen() % 100000);
        counts[0] = std::max<std::uint64_t>(counts[0], 1);
        const auto code = PrefixCode::from_counts(counts);
        double kraft = 0.0;
        for (std::size_t s = 0; s < alphabet; ++s)
        {
            CHECK((counts[s] == 0) == (code.lengths[s] == 0 && alphabet > 1 && counts[s] == 0));
            if (code.lengths[s] > 0)
                kraft += std::ldexp(1.0, -code.lengths[s]);
        }
        CHECK(kraft <= 1.0 + 1e-12);

        std::vector<std::uint32_t> sym;
        for (std::size_t s = 0; s < alphabet; ++s)
            for (std::uint64_t k = 0; k < std::min<std::uint64_t>(counts[s], 20); ++k)
                sym.push_back(static_cast<std::uint32_t>(s));
        std::shuffle(sym.begin(), sym.end(), gen);
        BitWriter w;
        entropy_encode(sym, code, w);
        BitReader r(w.bytes(), w.bit_count());
        CHECK(entropy_decode(r, sym.size(), code) == sym);
        CHECK(r.remaining() == 0);
    }
    {
        std::vector<std::uint64_t> fib(60);
        fib[0] = fib[1] = 1;
        for (std::size_t k = 2; k < fib.size(); ++k)
            fib[k] = fib[k - 1] + fib[k - 2];
        const auto code = PrefixCode::from_counts(fib);
        for (auto l : code.lengths)
        {
            CHECK(l >= 1);
            CHECK(l <= max_code_length);
        }
        const std::vector<std::uint32_t> sym = {0, 1, 59, 30, 0};
        BitWriter w;
        entropy_encode(sym, code, w);
        BitReader r(w.bytes(), w.bit_count());
        CHECK(entropy_decode(r, sym.size(), code) == sym);
    }
}

TEST_CASE("canonical code rebuilt from lengths")
{
    const std::vector<std::uint64_t> counts = {5, 9, 12, 13, 16, 45};
    const auto code = PrefixCode::from_counts(counts);
    const auto again = PrefixCode::from_lengths(code.lengths);
    CHECK(again.codes == code.codes);
    CHECK(code.average_length(counts) == doctest::Approx(224.0 / 100.0));
}

TEST_CASE("bit reader rejects overruns")
{
    BitWriter w;
    w.put(0b101, 3);
    BitReader r(w.bytes(), w.bit_count());
    CHECK(r.get(3) == 0b101);
    check_code(ErrorCode::MalformedBitstream, [&] { r.get(1); });
}

TEST_CASE("predictive loop lowers index entropy on correlated input")
{
    const auto fr = ar1_frame(20000, 0.9, 7);
    CodecConfig direct;
    direct.block_len = 20000;
    direct.bits_per_component = 6;
    direct.quantizer = QuantizerKind::uniform;
    direct.entropy_stage = true;
    auto shaped = direct;
    shaped.noise_shaping = true;
    const double h_direct = empirical_entropy(encode_frame(fr, direct).indices);
    const double h_shaped = empirical_entropy(encode_frame(fr, shaped).indices);
    MESSAGE("index entropy direct " << h_direct << ", predictive " << h_shaped);
    CHECK(h_shaped < h_direct);

    direct.quantizer = shaped.quantizer = QuantizerKind::lloyd_max;
    CHECK(empirical_entropy(encode_frame(fr, shaped).indices) < empirical_entropy(encode_frame(fr, direct).indices));
    const auto rep = run_codec(fr, shaped);
    CHECK(rep.evm < 0.2);
}

TEST_CASE("reference configuration reaches the target ratio")
{
    const auto fr = synthetic_gaussian_frame(15360, 15.36e6, 4.5e6, 42);
    CodecConfig cfg;
    cfg.resample_ratio = {3, 4};
    const auto rep = run_codec(fr, cfg);
    MESSAGE("ratio " << rep.compression_ratio << " evm " << rep.evm);
    CHECK(rep.compression_ratio >= 2.5);
    CHECK(rep.evm <= 0.08);
    CHECK(rep.samples == 15360);
}

TEST_CASE("SQNR grows with bits")
{
    const auto fr = synthetic_gaussian_frame(4096, 15.36e6, 4.5e6, 9);
    for (auto kind : {QuantizerKind::uniform, QuantizerKind::lloyd_max})
    {
        double prev = -INFINITY;
        const unsigned top = kind == QuantizerKind::uniform ? 14 : 8;
        for (unsigned b = 2; b <= top; ++b)
        {
            CodecConfig cfg;
            cfg.quantizer = kind;
            cfg.bits_per_component = b;
            const double s = run_codec(fr, cfg).sqnr_db;
            CHECK(s >= prev);
            prev = s;
        }
    }
}

TEST_CASE("distortion matches the quantizer design")
{
    for (unsigned b : {3U, 5U, 7U})
    {
        const std::size_t n = 16384;
        const auto fr = synthetic_gaussian_frame(n, 15.36e6, 7.68e6, b);
        CodecConfig cfg;
        cfg.bits_per_component = b;
        cfg.block_len = n;
        const auto rep = run_codec(fr, cfg);
        const double predicted = lloyd_max_design(b).design_mse;
        const double measured = rep.evm * rep.evm;
        MESSAGE(b << " bits: evm^2 " << measured << " design " << predicted);
        CHECK(std::abs(measured / predicted - 1.0) <= 0.2);
    }
}

TEST_CASE("entropy stage is lossless inside the codec")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto fr = synthetic_gaussian_frame(500 + 37 * seed, 15.36e6, 4.5e6, seed);
        CodecConfig with;
        with.resample_ratio = {3, 4};
        with.noise_shaping = seed % 2 == 1;
        with.quantizer = seed % 3 == 0 ? QuantizerKind::uniform : QuantizerKind::lloyd_max;
        auto without = with;
        without.entropy_stage = false;
        const auto a = encode_frame(fr, with);
        const auto b = encode_frame(fr, without);
        CHECK(a.indices == b.indices);
        const auto da = decode(a.bitstream), db = decode(b.bitstream);
        CHECK(same_bits(da.samples, db.samples));
        CHECK(da.samples.size() == fr.samples.size());
        CHECK(da.sample_rate == fr.sample_rate);
    }
}

TEST_CASE("bitstream header echoes the configuration")
{
    const auto fr = synthetic_gaussian_frame(333, 30.72e6, 9e6, 1);
    CodecConfig cfg;
    cfg.resample_ratio = {6, 8};
    cfg.block_len = 16;
    cfg.quantizer = QuantizerKind::uniform;
    cfg.bits_per_component = 11;
    cfg.noise_shaping = true;
    cfg.entropy_stage = false;
    const auto bs = encode(fr, cfg);
    REQUIRE(bs.bytes.size() > 4);
    CHECK(std::memcmp(bs.bytes.data(), "CIQ1", 4) == 0);
    const auto echo = bitstream_config(bs);
    CHECK(echo.resample_ratio.num == 3);
    CHECK(echo.resample_ratio.den == 4);
    CHECK(echo.block_len == 16);
    CHECK(echo.quantizer == QuantizerKind::uniform);
    CHECK(echo.bits_per_component == 11);
    CHECK(echo.noise_shaping);
    CHECK_FALSE(echo.entropy_stage);
    const std::size_t n = bs.bytes.size();
    const std::uint32_t trailer = (std::uint32_t(bs.bytes[n - 4]) << 24) | (std::uint32_t(bs.bytes[n - 3]) << 16) |
                                  (std::uint32_t(bs.bytes[n - 2]) << 8) | std::uint32_t(bs.bytes[n - 1]);
    CHECK(trailer == n);
}

TEST_CASE("empty frames round trip")
{
    IqFrame fr{{}, 1e6, 1.0};
    const auto out = decode(encode(fr, CodecConfig{}));
    CHECK(out.samples.empty());
}

TEST_CASE("malformed bitstreams are rejected")
{
    const auto fr = synthetic_gaussian_frame(256, 15.36e6, 4.5e6, 3);
    const auto bs = encode(fr, CodecConfig{});
    auto bad = bs;
    bad.bytes[0] = 'X';
    check_code(ErrorCode::MalformedBitstream, [&] { decode(bad); });
    bad = bs;
    bad.bytes.resize(bs.bytes.size() / 2);
    check_code(ErrorCode::MalformedBitstream, [&] { decode(bad); });
    bad = bs;
    bad.bytes.back() ^= 1;
    check_code(ErrorCode::MalformedBitstream, [&] { decode(bad); });
    check_code(ErrorCode::MalformedBitstream, [] { decode(CompressedBitstream{}); });
    check_code(ErrorCode::MalformedBitstream, [] { decode(CompressedBitstream{{'C', 'I', 'Q', '1', 0, 0, 0, 8}}); });

    // Random corruption either decodes or fails cleanly.
    std::mt19937_64 gen(17);
    int rejected = 0;
    for (int t = 0; t < 500; ++t)
    {
        auto c = bs;
        const int flips = 1 + static_cast<int>(gen() % 4);
        for (int f = 0; f < flips; ++f)
            c.bytes[gen() % (c.bytes.size() - 4)] ^= static_cast<std::uint8_t>(1U << (gen() % 8));
        try
        {
            const auto out = decode(c);
            CHECK(out.samples.size() <= 256);
        }
        catch (const Error &e)
        {
            CHECK(e.code() == ErrorCode::MalformedBitstream);
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("codec config validation and JSON")
{
    CodecConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.bits_per_component = 0;
    check_code(ErrorCode::InvalidConfig, [&] { bad.validate(); });
    bad.bits_per_component = 21;
    bad.quantizer = QuantizerKind::uniform;
    check_code(ErrorCode::InvalidConfig, [&] { bad.validate(); });
    bad = cfg;
    bad.bits_per_component = 9;
    check_code(ErrorCode::InvalidConfig, [&] { bad.validate(); });
    bad = cfg;
    bad.block_len = 0;
    check_code(ErrorCode::InvalidConfig, [&] { bad.validate(); });
    bad = cfg;
    bad.resample_ratio = {1, 300};
    check_code(ErrorCode::InvalidRatio, [&] { bad.validate(); });

    cfg.resample_ratio = {3, 4};
    cfg.noise_shaping = true;
    cfg.quantizer = QuantizerKind::uniform;
    cfg.bits_per_component = 12;
    const auto j = to_json(cfg);
    const auto back = codec_config_from_json(j);
    CHECK(to_json(back) == j);
    auto extra = j;
    extra["dither"] = true;
    check_code(ErrorCode::SchemaError, [&] { codec_config_from_json(extra); });
    auto wrong = j;
    wrong["quantizer"] = "vector";
    check_code(ErrorCode::SchemaError, [&] { codec_config_from_json(wrong); });
    const auto partial = codec_config_from_json(nlohmann::json{{"bits_per_component", 5}});
    CHECK(partial.bits_per_component == 5);
    CHECK(partial.block_len == 32);
}

TEST_CASE("raw IQ files")
{
    const auto fr = synthetic_gaussian_frame(100, 1e6, 2e5, 4);
    const auto path = std::filesystem::temp_directory_path() / "cranlab_raw_iq.bin";
    write_raw_iq(path, fr);
    CHECK(std::filesystem::file_size(path) == 800);
    const auto back = read_raw_iq(path, 1e6, 1.0);
    REQUIRE(back.samples.size() == 100);
    for (std::size_t k = 0; k < 100; ++k)
    {
        CHECK(back.samples[k].real() == static_cast<float>(fr.samples[k].real()));
        CHECK(back.samples[k].imag() == static_cast<float>(fr.samples[k].imag()));
    }
    std::filesystem::remove(path);
    check_code(ErrorCode::IoError, [] { read_raw_iq("/nonexistent/iq.bin", 1.0, 1.0); });
}

TEST_CASE("synthetic frames respect full scale and are reproducible")
{
    const auto a = synthetic_gaussian_frame(4096, 15.36e6, 4.5e6, 8, 2.0);
    const auto b = synthetic_gaussian_frame(4096, 15.36e6, 4.5e6, 8, 2.0);
    CHECK(same_bits(a.samples, b.samples));
    CHECK_NOTHROW(a.validate());
    // Peak-to-rms ratio set by the crest factor.
    const double rms = std::sqrt(power(a.samples) / 2.0);
    CHECK(rms == doctest::Approx(2.0 / 4.0).epsilon(0.05));
}
