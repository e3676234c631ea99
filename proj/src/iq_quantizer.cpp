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
#include <limits>
#include <numbers>

#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"

namespace cranlab
{

namespace
{

double pdf(double x)
{
    if (std::isinf(x))
        return 0.0;
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Upper tail P(X > x).
double tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double mass(double a, double b)
{
    if (a >= 0.0)
        return tail(a) - tail(b);
    if (b <= 0.0)
        return tail(-b) - tail(-a);
    return 1.0 - tail(b) - tail(-a);
}

double x_pdf(double x) { return std::isinf(x) ? 0.0 : x * pdf(x); }

double inverse_cdf(double p)
{
    // Newton on the tail function, started from a logistic guess.
    double x = std::log(p / (1.0 - p)) / 1.702;
    for (int it = 0; it < 100; ++it)
    {
        const double f = (1.0 - tail(x)) - p;
        const double step = f / pdf(x);
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x)))
            break;
    }
    return x;
}

} // namespace

void IqFrame::validate() const
{
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        fail(ErrorCode::InvalidArgument, "sample rate must be positive");
    if (!(full_scale > 0.0) || !std::isfinite(full_scale))
        fail(ErrorCode::InvalidArgument, "full scale must be positive");
    for (const auto &s : samples)
        if (!(std::abs(s.real()) <= full_scale) || !(std::abs(s.imag()) <= full_scale))
            fail(ErrorCode::InvalidArgument, "sample exceeds full scale");
}

BlockScaled block_scale(const IqFrame &frame, std::size_t block_len)
{
    if (block_len < 1)
        fail(ErrorCode::InvalidArgument, "block length must be at least 1");
    BlockScaled out;
    out.frame = frame;
    out.block_len = block_len;
    const std::size_t n = frame.samples.size();
    for (std::size_t start = 0; start < n; start += block_len)
    {
        const std::size_t stop = std::min(n, start + block_len);
        double peak = 0.0;
        for (std::size_t k = start; k < stop; ++k)
            peak = std::max({peak, std::abs(frame.samples[k].real()), std::abs(frame.samples[k].imag())});
        int e = 0;
        if (peak > 0.0)
        {
            int pe = 0, fe = 0;
            const double pm = std::frexp(peak, &pe);
            const double fm = std::frexp(frame.full_scale, &fe);
            e = fe - pe;
            if (pm > fm)
                --e; // peak * 2^e must not exceed full scale
            e = std::clamp(e, -127, 127);
        }
        out.exponents.push_back(static_cast<std::int8_t>(e));
        for (std::size_t k = start; k < stop; ++k)
            out.frame.samples[k] = {std::ldexp(frame.samples[k].real(), e), std::ldexp(frame.samples[k].imag(), e)};
    }
    return out;
}

IqFrame block_descale(const BlockScaled &scaled)
{
    if (scaled.block_len < 1)
        fail(ErrorCode::InvalidArgument, "block length must be at least 1");
    IqFrame out = scaled.frame;
    const std::size_t n = out.samples.size();
    if (scaled.exponents.size() != (n + scaled.block_len - 1) / scaled.block_len)
        fail(ErrorCode::DimensionMismatch, "one exponent per block is required");
    for (std::size_t k = 0; k < n; ++k)
    {
        const int e = -scaled.exponents[k / scaled.block_len];
        out.samples[k] = {std::ldexp(out.samples[k].real(), e), std::ldexp(out.samples[k].imag(), e)};
    }
    return out;
}

std::uint32_t ScalarQuantizer::index(double x) const
{
    const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
    return static_cast<std::uint32_t>(it - thresholds.begin());
}

ScalarQuantizer lloyd_max_design(unsigned bits)
{
    if (bits < 1 || bits > max_lloyd_max_bits)
        fail(ErrorCode::InvalidConfig, "Lloyd-Max design supports 1 to 8 bits");
    const std::size_t n = std::size_t{1} << bits;
    constexpr double inf = std::numeric_limits<double>::infinity();

    ScalarQuantizer q;
    q.levels.resize(n);
    q.thresholds.resize(n - 1);
    // Start from the high-resolution companding point density.
    for (std::size_t k = 0; k < n; ++k)
        q.levels[k] = std::sqrt(3.0) * inverse_cdf((static_cast<double>(k) + 0.5) / static_cast<double>(n));

    for (int it = 0; it < 1000000; ++it)
    {
        for (std::size_t k = 0; k + 1 < n; ++k)
            q.thresholds[k] = 0.5 * (q.levels[k] + q.levels[k + 1]);
        double moved = 0.0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const double a = k == 0 ? -inf : q.thresholds[k - 1];
            const double b = k + 1 == n ? inf : q.thresholds[k];
            const double c = (pdf(a) - pdf(b)) / mass(a, b);
            moved = std::max(moved, std::abs(c - q.levels[k]));
            q.levels[k] = c;
        }
        q.iterations = it + 1;
        if (moved < 1e-9)
            break;
    }
    // Enforce exact antisymmetry of the table.
    for (std::size_t k = 0; k < n / 2; ++k)
    {
        const double v = 0.5 * (q.levels[n - 1 - k] - q.levels[k]);
        q.levels[k] = -v;
        q.levels[n - 1 - k] = v;
    }
    for (std::size_t k = 0; k + 1 < n; ++k)
        q.thresholds[k] = 0.5 * (q.levels[k] + q.levels[k + 1]);
    q.thresholds[n / 2 - 1] = 0.0;

    double mse = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double a = k == 0 ? -inf : q.thresholds[k - 1];
        const double b = k + 1 == n ? inf : q.thresholds[k];
        const double p = mass(a, b);
        const double m1 = pdf(a) - pdf(b);
        const double m2 = p + x_pdf(a) - x_pdf(b);
        const double y = q.levels[k];
        mse += m2 - 2.0 * y * m1 + y * y * p;
    }
    q.design_mse = mse;
    return q;
}

ScalarQuantizer uniform_design(unsigned bits)
{
    if (bits < 1 || bits > 20)
        fail(ErrorCode::InvalidConfig, "uniform quantizer supports 1 to 20 bits");
    const std::size_t n = std::size_t{1} << bits;
    const double step = 2.0 / static_cast<double>(n);
    ScalarQuantizer q;
    q.levels.resize(n);
    q.thresholds.resize(n - 1);
    for (std::size_t k = 0; k < n; ++k)
        q.levels[k] = -1.0 + (static_cast<double>(k) + 0.5) * step;
    for (std::size_t k = 0; k + 1 < n; ++k)
        q.thresholds[k] = -1.0 + static_cast<double>(k + 1) * step;
    q.design_mse = step * step / 12.0;
    return q;
}

} // namespace cranlab
