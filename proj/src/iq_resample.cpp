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
#include <cmath>
#include <numbers>
#include <numeric>

#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"

namespace cranlab
{

namespace
{

constexpr double stopband_attenuation_db = 70.0;

double bessel_i0(double x)
{
    double sum = 1.0;
    double term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 200; ++k)
    {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum;
}

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// Low-pass prototype at the upsampled rate, normalized frequencies in cycles/sample.
std::vector<double> design_lowpass(double pass, double stop, double gain)
{
    const double a = stopband_attenuation_db;
    const double beta = 0.1102 * (a - 8.7);
    const double dw = 2.0 * std::numbers::pi * (stop - pass);
    auto n = static_cast<std::size_t>(std::ceil((a - 8.0) / (2.285 * dw))) + 1;
    if (n % 2 == 0)
        ++n;
    const double fc = 0.5 * (pass + stop);
    const double mid = 0.5 * static_cast<double>(n - 1);
    const double i0b = bessel_i0(beta);
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double t = static_cast<double>(k) - mid;
        const double r = t / mid;
        const double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        h[k] = 2.0 * fc * sinc(2.0 * fc * t) * w;
    }
    const double dc = std::accumulate(h.begin(), h.end(), 0.0);
    for (auto &v : h)
        v *= gain / dc;
    return h;
}

std::size_t mirror(std::ptrdiff_t i, std::size_t n)
{
    if (n == 1)
        return 0;
    const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
    i %= period;
    if (i < 0)
        i += period;
    if (i >= static_cast<std::ptrdiff_t>(n))
        i = period - i;
    return static_cast<std::size_t>(i);
}

} // namespace

Ratio Ratio::reduced() const
{
    if (num == 0 || den == 0)
        fail(ErrorCode::InvalidRatio, "resampling ratio terms must be positive");
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
}

std::size_t resampled_length(std::size_t n, Ratio ratio)
{
    const auto r = ratio.reduced();
    return static_cast<std::size_t>((static_cast<std::uint64_t>(n) * r.num + r.den - 1) / r.den);
}

IqFrame resample(const IqFrame &frame, Ratio ratio)
{
    const auto r = ratio.reduced();
    if (r.num > max_ratio_term || r.den > max_ratio_term)
        fail(ErrorCode::InvalidRatio, "resampling ratio terms must not exceed 256 after reduction");
    if (!(frame.sample_rate > 0.0))
        fail(ErrorCode::InvalidArgument, "sample rate must be positive");

    IqFrame out;
    out.full_scale = frame.full_scale;
    out.sample_rate = frame.sample_rate * r.value();
    if (r.num == 1 && r.den == 1)
    {
        out.samples = frame.samples;
        return out;
    }
    const std::size_t n_in = frame.samples.size();
    const std::size_t n_out = resampled_length(n_in, r);
    out.samples.assign(n_out, IqSample{});
    if (n_in == 0)
        return out;

    // Band edges relative to the upsampled rate num * fs_in.
    const double narrow = 0.5 / static_cast<double>(std::max(r.num, r.den));
    const auto h = design_lowpass(0.8 * narrow, narrow, static_cast<double>(r.num));
    const auto taps = static_cast<std::ptrdiff_t>(h.size());
    const auto delay = (taps - 1) / 2;
    const auto up = static_cast<std::ptrdiff_t>(r.num);

    for (std::size_t m = 0; m < n_out; ++m)
    {
        // Upsampled-grid position aligned with the filter centre.
        const auto t = static_cast<std::ptrdiff_t>(m) * static_cast<std::ptrdiff_t>(r.den) + delay;
        // Only taps landing on original samples contribute: (t - k) divisible by num.
        std::ptrdiff_t k0 = t % up;
        if (k0 < 0)
            k0 += up;
        IqSample acc{};
        for (std::ptrdiff_t k = k0; k < taps; k += up)
        {
            const auto pos = (t - k) / up;
            acc += h[static_cast<std::size_t>(k)] * frame.samples[mirror(pos, n_in)];
        }
        out.samples[m] = acc;
    }
    return out;
}

} // namespace cranlab
