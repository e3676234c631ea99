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

// Acceptance suite: one line per criterion, non-zero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cranlab/dimensioning.hpp"
#include "cranlab/downlink.hpp"
#include "cranlab/experiment.hpp"
#include "cranlab/iq.hpp"
#include "cranlab/quantizer_design.hpp"
#include "cranlab/rrm.hpp"
#include "cranlab/scenario_io.hpp"
#include "cranlab/uplink.hpp"
#include "support/gaussian_oracle.hpp"
#include "support/lloyd_oracle.hpp"

using namespace cranlab;
namespace fs = std::filesystem;

namespace
{

const fs::path source_dir{CRANLAB_SOURCE_DIR};

struct Outcome
{
    bool pass = true;
    std::string detail;
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

template <typename... Args>
std::string format(const char *fmt, Args... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

struct DlInstance
{
    ClusterConfig cfg;
    ChannelRealization ch;
    DlSignalPlan plan;
    QuantizationConfig q;
};

DlInstance random_dl_instance(std::uint64_t seed, bool correlated)
{
    auto base = oracle::random_uplink_instance(seed);
    std::mt19937_64 gen(seed ^ 0xacce97ULL);
    base.cfg.noise_var_dl = std::uniform_real_distribution<double>(0.05, 1.0)(gen);
    DlInstance d{base.cfg, base.ch, oracle::random_plan(gen, base.cfg), base.q};
    if (correlated)
        d.q = oracle::random_correlated_q(gen, d.cfg);
    return d;
}

Outcome chain_rules()
{
    Outcome out;
    std::mt19937_64 gen(101);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const auto inst = oracle::random_uplink_instance(10000 + seed);
        const auto &cfg = inst.cfg;
        const double joint_rate = oracle::ul_joint(cfg, inst.ch, inst.q);
        const double joint_comp = oracle::ul_compression_joint(cfg, inst.ch, inst.q);
        for (int t = 0; t < 2; ++t)
        {
            const auto ue_order = oracle::random_permutation(gen, cfg.n_ue);
            const auto ru_order = oracle::random_permutation(gen, cfg.n_ru);
            const double sic = oracle::sum(cranlab::ul_rate_sic(cfg, inst.ch, inst.q, ue_order));
            const double wz = oracle::sum(cranlab::ul_fronthaul_wyner_ziv(cfg, inst.ch, inst.q, ru_order));
            worst = std::max({worst, rel_diff(sic, joint_rate), rel_diff(wz, joint_comp)});
        }
    }
    out.pass = worst <= 1e-9;
    out.detail = format("200 instances, worst relative error %.2e", worst);
    return out;
}

// Block-diagonal restriction of q to a random grouping of the RUs.
QuantizationConfig grouped_q(const QuantizationConfig &q, const std::vector<int> &group)
{
    ComplexMatrix m = q.covariance().matrix();
    const auto b = static_cast<Eigen::Index>(q.block_dim());
    for (std::size_t j = 0; j < group.size(); ++j)
        for (std::size_t k = 0; k < group.size(); ++k)
            if (group[j] != group[k])
                m.block(static_cast<Eigen::Index>(j) * b, static_cast<Eigen::Index>(k) * b, b, b).setZero();
    return {HermitianPsd(m), q.block_dim()};
}

Outcome dominance()
{
    Outcome out;
    std::mt19937_64 gen(202);
    double wz_excess = -INFINITY, min_surcharge = INFINITY, max_zero = 0.0, min_nonzero = INFINITY;
    std::size_t violations = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
    {
        const auto inst = oracle::random_uplink_instance(20000 + seed);
        const auto ru_order = oracle::random_permutation(gen, inst.cfg.n_ru);
        const auto wz = cranlab::ul_fronthaul_wyner_ziv(inst.cfg, inst.ch, inst.q, ru_order);
        const auto indep = cranlab::ul_fronthaul_indep(inst.cfg, inst.ch, inst.q);
        for (std::size_t j = 0; j < wz.size(); ++j)
        {
            wz_excess = std::max(wz_excess, wz[j] - indep[j]);
            violations += wz[j] > indep[j] + 1e-12;
        }

        const auto d = random_dl_instance(20000 + seed, true);
        std::vector<int> group(d.cfg.n_ru);
        for (auto &g : group)
            g = std::uniform_int_distribution<int>(0, 1)(gen);
        const auto q = grouped_q(d.q, group);
        const auto order = oracle::random_permutation(gen, d.cfg.n_ru);
        const auto multi = cranlab::dl_fronthaul_multivariate(d.plan, q, order);
        const auto base = cranlab::dl_fronthaul_indep(d.plan, q.diagonal_part());
        for (std::size_t p = 0; p < order.size(); ++p)
        {
            const auto j = order[p];
            const double surcharge = multi[j] - base[j];
            bool correlated = false;
            for (std::size_t r = 0; r < p; ++r)
                correlated = correlated || group[order[r]] == group[j];
            min_surcharge = std::min(min_surcharge, surcharge);
            violations += surcharge < -1e-12;
            if (correlated)
            {
                min_nonzero = std::min(min_nonzero, surcharge);
                violations += surcharge <= 1e-12;
            }
            else
            {
                max_zero = std::max(max_zero, std::abs(surcharge));
                violations += std::abs(surcharge) > 1e-12;
            }
        }
    }
    out.pass = violations == 0;
    out.detail = format("max C_wz - C_indep %.2e, min surcharge %.2e, uncorrelated |surcharge| <= %.2e, "
                        "correlated surcharge >= %.2e",
                        wz_excess, min_surcharge, max_zero, min_nonzero);
    return out;
}

Outcome oracle_equivalence()
{
    Outcome out;
    std::mt19937_64 gen(303);
    double worst_ul = 0.0, worst_dl = 0.0;
    auto track = [](double &worst, const std::vector<double> &got, const std::vector<double> &expect) {
        if (got.size() != expect.size())
            worst = INFINITY;
        for (std::size_t k = 0; k < std::min(got.size(), expect.size()); ++k)
            worst = std::max(worst, rel_diff(got[k], expect[k]));
    };
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const auto inst = oracle::random_uplink_instance(30000 + seed);
        const auto &cfg = inst.cfg;
        const auto ue_order = oracle::random_permutation(gen, cfg.n_ue);
        const auto ru_order = oracle::random_permutation(gen, cfg.n_ru);
        track(worst_ul, cranlab::ul_rate_linear(cfg, inst.ch, inst.q), oracle::ul_linear(cfg, inst.ch, inst.q));
        track(worst_ul, cranlab::ul_rate_sic(cfg, inst.ch, inst.q, ue_order),
              oracle::ul_sic(cfg, inst.ch, inst.q, ue_order));
        track(worst_ul, cranlab::ul_fronthaul_indep(cfg, inst.ch, inst.q),
              oracle::ul_fronthaul_indep(cfg, inst.ch, inst.q));
        track(worst_ul, cranlab::ul_fronthaul_wyner_ziv(cfg, inst.ch, inst.q, ru_order),
              oracle::ul_fronthaul_wz(cfg, inst.ch, inst.q, ru_order));

        const auto d = random_dl_instance(30000 + seed, true);
        const auto dl_ue = oracle::random_permutation(gen, d.cfg.n_ue);
        const auto dl_ru = oracle::random_permutation(gen, d.cfg.n_ru);
        const auto diag = d.q.diagonal_part();
        track(worst_dl, cranlab::dl_rate_linear(d.cfg, d.ch, d.plan, d.q), oracle::dl_linear(d.cfg, d.ch, d.plan, d.q));
        track(worst_dl, cranlab::dl_rate_dpc(d.cfg, d.ch, d.plan, d.q, dl_ue),
              oracle::dl_dpc(d.cfg, d.ch, d.plan, d.q, dl_ue));
        track(worst_dl, cranlab::dl_fronthaul_indep(d.plan, diag), oracle::dl_fronthaul_indep(d.plan, diag));
        track(worst_dl, cranlab::dl_fronthaul_multivariate(d.plan, d.q, dl_ru),
              oracle::dl_fronthaul_multivariate(d.plan, d.q, dl_ru));
    }
    out.pass = worst_ul <= 1e-9 && worst_dl <= 1e-9;
    out.detail = format("100 instances, worst relative error uplink %.2e, downlink %.2e", worst_ul, worst_dl);
    return out;
}

// Plug-in mutual information (bits) of a real pair over an equal-frequency
// grid, with the Miller-Madow bias correction.
double histogram_mi(const std::vector<double> &a, const std::vector<double> &b, std::size_t bins = 128)
{
    const std::size_t n = a.size();
    auto ranks = [&](const std::vector<double> &v) {
        std::vector<std::size_t> idx(n), bin(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return v[x] < v[y]; });
        for (std::size_t r = 0; r < n; ++r)
            bin[idx[r]] = r * bins / n;
        return bin;
    };
    const auto ba = ranks(a), bb = ranks(b);
    std::vector<double> joint(bins * bins, 0.0), pa(bins, 0.0), pb(bins, 0.0);
    for (std::size_t k = 0; k < n; ++k)
    {
        joint[ba[k] * bins + bb[k]] += 1.0;
        pa[ba[k]] += 1.0;
        pb[bb[k]] += 1.0;
    }
    const double dn = static_cast<double>(n);
    double mi = 0.0;
    std::size_t occupied = 0;
    for (std::size_t i = 0; i < bins; ++i)
        for (std::size_t j = 0; j < bins; ++j)
        {
            const double c = joint[i * bins + j];
            if (c == 0.0)
                continue;
            ++occupied;
            mi += c / dn * std::log2(c * dn / (pa[i] * pb[j]));
        }
    const double correction = (static_cast<double>(occupied) - 2.0 * static_cast<double>(bins) + 1.0) /
                              (2.0 * dn * std::numbers::ln2);
    return mi - correction;
}

// Complex I(x; y) for circular inputs and a real gain: the real and imaginary
// parts form independent real channels.
double complex_mi(const std::vector<IqSample> &x, const std::vector<IqSample> &y)
{
    std::vector<double> xr(x.size()), yr(y.size()), xi(x.size()), yi(y.size());
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        xr[k] = x[k].real();
        xi[k] = x[k].imag();
        yr[k] = y[k].real();
        yi[k] = y[k].imag();
    }
    return histogram_mi(xr, yr) + histogram_mi(xi, yi);
}

std::vector<IqSample> cn(std::mt19937_64 &gen, std::size_t n, double var)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(var / 2.0));
    std::vector<IqSample> v(n);
    for (auto &s : v)
        s = {nd(gen), nd(gen)};
    return v;
}

Outcome monte_carlo()
{
    Outcome out;
    constexpr std::size_t n = 1000000;
    std::mt19937_64 gen(404);
    const double h0 = 1.0, h1 = 0.7, p0 = 1.0, p1 = 0.8, s2 = 0.5, qv = 0.3;

    auto cfg = ClusterConfig::uniform(2, 1, 1, 1, 10.0, s2);
    cfg.ue_tx_cov = {HermitianPsd::identity(1, p0), HermitianPsd::identity(1, p1)};
    cfg.noise_var_dl = s2;
    ComplexMatrix h(1, 2);
    h << h0, h1;
    const auto ch = make_reciprocal_channel(cfg, h);
    const auto q = QuantizationConfig::isotropic(std::vector<double>{qv}, 1);

    const auto x0 = cn(gen, n, p0), x1 = cn(gen, n, p1), z = cn(gen, n, s2), e = cn(gen, n, qv);
    std::vector<IqSample> yhat(n), cancelled(n), y(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        y[k] = h0 * x0[k] + h1 * x1[k] + z[k];
        yhat[k] = y[k] + e[k];
        cancelled[k] = yhat[k] - h0 * x0[k];
    }

    const auto lin = cranlab::ul_rate_linear(cfg, ch, q);
    const std::size_t order[] = {0, 1};
    const auto sic = cranlab::ul_rate_sic(cfg, ch, q, order);
    const auto fh = cranlab::ul_fronthaul_indep(cfg, ch, q);

    // Downlink: one RU serving both UEs, x = s0 + s1 + quantization noise.
    const DlSignalPlan plan({HermitianPsd::identity(1, p0), HermitianPsd::identity(1, p1)}, {}, 1);
    const auto dl = cranlab::dl_rate_linear(cfg, ch, plan, q);
    const auto zd = cn(gen, n, s2);
    std::vector<IqSample> rx0(n);
    for (std::size_t k = 0; k < n; ++k)
        rx0[k] = h0 * (x0[k] + x1[k] + e[k]) + zd[k];

    struct Case
    {
        const char *name;
        double closed;
        double estimate;
    };
    const Case cases[] = {
        {"ul linear", lin[0], complex_mi(x0, yhat)},
        {"ul sic", sic[1], complex_mi(x1, cancelled)},
        {"ul fronthaul", fh[0], complex_mi(y, yhat)},
        {"dl linear", dl[0], complex_mi(x0, rx0)},
    };
    std::ostringstream detail;
    detail << "1e6 samples";
    for (const auto &c : cases)
    {
        const double err = std::abs(c.estimate / c.closed - 1.0);
        out.pass = out.pass && err <= 0.02;
        detail << format("; %s %.4f vs %.4f (%.2f%%)", c.name, c.estimate, c.closed, 100.0 * err);
    }
    out.detail = detail.str();
    return out;
}

Outcome lloyd_max()
{
    Outcome out;
    const auto one = lloyd_max_design(1);
    const double target = std::sqrt(2.0 / std::numbers::pi);
    const double level_err = std::max(std::abs(one.levels[1] - target), std::abs(one.levels[0] + target));
    const auto two = lloyd_max_design(2);
    const auto ref = oracle::grid_lloyd(2);
    const double mse_err = std::abs(two.design_mse - ref.mse);
    out.pass = level_err <= 1e-4 && mse_err <= 1e-3;
    out.detail = format("1-bit level error %.2e, 2-bit MSE %.6f vs grid %.6f", level_err, two.design_mse, ref.mse);
    return out;
}

bool same_bits(const std::vector<IqSample> &a, const std::vector<IqSample> &b)
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const IqSample &x, const IqSample &y) {
               return std::bit_cast<std::uint64_t>(x.real()) == std::bit_cast<std::uint64_t>(y.real()) &&
                      std::bit_cast<std::uint64_t>(x.imag()) == std::bit_cast<std::uint64_t>(y.imag());
           });
}

Outcome iq_codec()
{
    Outcome out;
    CodecConfig ref;
    ref.resample_ratio = {3, 4};
    double min_ratio = INFINITY, max_evm = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto rep = run_codec(synthetic_gaussian_frame(15360, 15.36e6, 4.5e6, seed), ref);
        min_ratio = std::min(min_ratio, rep.compression_ratio);
        max_evm = std::max(max_evm, rep.evm);
    }
    const bool lossy_ok = min_ratio >= 2.5 && max_evm <= 0.08;

    std::mt19937_64 gen(606);
    std::size_t failures = 0;
    for (std::uint64_t f = 0; f < 1000; ++f)
    {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 1500)(gen);
        const auto frame = synthetic_gaussian_frame(len, 15.36e6, std::uniform_real_distribution<double>(1e6, 7e6)(gen),
                                                    f, std::uniform_real_distribution<double>(0.5, 4.0)(gen));
        CodecConfig cfg;
        cfg.block_len = std::uniform_int_distribution<std::size_t>(1, 64)(gen);
        cfg.bits_per_component = std::uniform_int_distribution<unsigned>(2, 8)(gen);
        cfg.quantizer = f % 2 ? QuantizerKind::lloyd_max : QuantizerKind::uniform;
        cfg.noise_shaping = f % 3 == 0;
        cfg.resample_ratio = f % 4 == 0 ? Ratio{1, 1} : Ratio{3, 4};

        // Block scaling by powers of two.
        const auto scaled = block_scale(frame, cfg.block_len);
        bool ok = same_bits(block_descale(scaled).samples, frame.samples);

        // Prefix code over the quantizer indices.
        const auto encoded = encode_frame(frame, cfg);
        const auto counts = symbol_counts(encoded.indices, std::size_t{1} << cfg.bits_per_component);
        const auto code = PrefixCode::from_counts(counts);
        BitWriter w;
        entropy_encode(encoded.indices, code, w);
        BitReader r(w.bytes(), w.bit_count());
        ok = ok && entropy_decode(r, encoded.indices.size(), code) == encoded.indices && r.remaining() == 0;

        // Entropy stage on and off give the same reconstruction; the
        // bitstream itself decodes deterministically.
        auto plain = cfg;
        plain.entropy_stage = false;
        const auto without = encode_frame(frame, plain);
        const auto da = decode(encoded.bitstream);
        ok = ok && without.indices == encoded.indices && same_bits(da.samples, decode(without.bitstream).samples) &&
             same_bits(da.samples, decode(encoded.bitstream).samples);
        failures += !ok;
    }
    out.pass = lossy_ok && failures == 0;
    out.detail = format("ratio >= %.3f with EVM <= %.2f%% over 10 frames; lossless failures %zu of 1000", min_ratio,
                        100.0 * max_evm, failures);
    return out;
}

Outcome dimensioning()
{
    Outcome out;
    CpriProfile prof;
    prof.sample_rate = 30.72e6;
    prof.bits_per_component = 15;
    prof.antennas = 8;
    const double rate = cpri_line_rate(prof);
    const double split_c = split_c_bandwidth(136.4e6);
    const std::vector<std::vector<bool>> table{
        {true, true, true, true}, {true, false, true, true}, {false, false, true, true}, {false, false, false, false}};
    const double latencies[] = {0.05, 0.5, 5.0, 30.0};
    bool table_ok = true;
    for (std::size_t k = 0; k < 4; ++k)
    {
        const auto rows = harq_budget_check(latencies[k], 1.0);
        for (std::size_t s = 0; s < 4; ++s)
            table_ok = table_ok && rows[s].feasible == table[k][s];
    }
    out.pass = std::abs(rate - 9.8304e9) <= 1e-6 * 9.8304e9 && std::abs(split_c / 150e6 - 1.0) <= 0.01 && table_ok;
    out.detail = format("CPRI %.4f Gbps, split C %.2f Mbps, split table %s", rate / 1e9, split_c / 1e6,
                        table_ok ? "matches" : "differs");
    return out;
}

ClusterConfig rrm_cluster()
{
    auto cfg = ClusterConfig::uniform(3, 3, 1, 2, 2.0, 0.1);
    for (Eigen::Index j = 0; j < 3; ++j)
        for (Eigen::Index i = 0; i < 3; ++i)
            cfg.pathloss_db(j, i) = 4.0 * static_cast<double>(std::abs(j - i));
    return cfg;
}

Outcome rrm()
{
    Outcome out;
    const auto cfg = rrm_cluster();
    std::vector<std::vector<std::size_t>> sets;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << cfg.n_ru); ++m)
        sets.push_back(mask_to_set(m));

    // V = 0: every frame's action against brute-force max-weight.
    std::size_t frames = 0, mismatches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        RrmPolicyConfig p;
        p.v = 0.0;
        p.horizon = 200;
        p.arrival_bits = calibrate_arrivals(cfg, DuplexMode::tdd_reciprocal, p, seed, 0.7, 50);
        const auto trace = run_rrm(cfg, DuplexMode::tdd_reciprocal, p, seed);
        for (const auto &f : trace.frames)
        {
            const auto ch = generate_channel(cfg, f.channel_seed, DuplexMode::tdd_reciprocal);
            double best = 0.0, second = 0.0;
            std::vector<std::size_t> best_set;
            for (const auto &set : sets)
            {
                double w = 0.0;
                if (!set.empty())
                {
                    const auto sub = restrict_to_rus(cfg, ch, set);
                    const auto fit =
                        fit_all_to_caps(sub.cfg, sub.channel, sub.cfg.fronthaul_caps, FronthaulLink::ul_indep);
                    const auto r = oracle::ul_linear(sub.cfg, sub.channel, fit.q);
                    for (std::size_t i = 0; i < cfg.n_ue; ++i)
                        w += f.queues[i] * r[i];
                }
                if (w > best)
                {
                    second = best;
                    best = w;
                    best_set = set;
                }
                else
                    second = std::max(second, w);
            }
            double chosen = 0.0;
            for (std::size_t i = 0; i < cfg.n_ue; ++i)
                chosen += f.queues[i] * f.rates[i];
            bool ok = rel_diff(chosen, best) <= 1e-9;
            if (best - second > 1e-6 * std::max(1.0, best))
                ok = ok && f.active == best_set;
            mismatches += !ok;
            ++frames;
        }
    }

    // Stability at 70% of the mean always-on rates over 10^4 frames.
    const auto pair = load_scenario(source_dir / "scenarios" / "pair_2x2.json");
    RrmPolicyConfig sp;
    sp.v = 1.0;
    sp.horizon = 10000;
    sp.arrival_bits = calibrate_arrivals(pair.cfg, pair.duplex, sp, 7, 0.7);
    const auto long_run = run_rrm(pair.cfg, pair.duplex, sp, 7);
    const bool stable = queues_stable(long_run);

    // V sweep: cost non-increasing and backlog non-decreasing in V.
    std::size_t trend_seeds = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        RrmPolicyConfig vp;
        vp.horizon = 2000;
        vp.arrival_bits = calibrate_arrivals(pair.cfg, pair.duplex, vp, seed, 0.7);
        std::vector<RrmSummary> s;
        for (double v : {1.0, 10.0, 100.0})
        {
            vp.v = v;
            s.push_back(run_rrm(pair.cfg, pair.duplex, vp, seed).summary);
        }
        bool trend = true;
        for (std::size_t k = 1; k < s.size(); ++k)
            trend = trend && s[k].mean_cost <= s[k - 1].mean_cost && s[k].mean_queue >= s[k - 1].mean_queue;
        trend_seeds += trend;
    }
    out.pass = mismatches == 0 && stable && trend_seeds >= 4;
    out.detail = format("V=0 max-weight %zu/%zu frames; 1e4-frame run %s (max queue %.1f); V-sweep trend on %zu/5 seeds",
                        frames - mismatches, frames, stable ? "stable" : "unstable", long_run.summary.max_queue,
                        trend_seeds);
    return out;
}

Outcome wyner_ziv_benefit()
{
    Outcome out;
    auto spec = load_experiment_spec(source_dir / "experiments" / "wz_compare.json");
    RunOptions opts;
    opts.write_outputs = false;
    const auto table = compare_strategies(spec, opts);
    const auto ratio = table.numeric_column("ratio");
    const auto wins = std::count_if(ratio.begin(), ratio.end(), [](double r) { return r >= 1.0; });
    const double mean = std::accumulate(ratio.begin(), ratio.end(), 0.0) / static_cast<double>(ratio.size());
    out.pass = ratio.size() == 20 && static_cast<double>(wins) >= 0.9 * static_cast<double>(ratio.size());
    out.detail = format("WZ >= independent on %td/%zu seeds, mean ratio %.3f", wins, ratio.size(), mean);
    return out;
}

struct Criterion
{
    int id;
    const char *name;
    double time_limit_s; // 0 when untimed
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const Criterion criteria[] = {
        {1, "chain rules", 10.0, chain_rules},
        {2, "dominance", 0.0, dominance},
        {3, "entropy oracle equivalence", 0.0, oracle_equivalence},
        {4, "Monte Carlo scalar rates", 0.0, monte_carlo},
        {5, "Lloyd-Max", 0.0, lloyd_max},
        {6, "IQ codec", 0.0, iq_codec},
        {7, "dimensioning constants", 0.0, dimensioning},
        {8, "RRM", 60.0, rrm},
        {9, "Wyner-Ziv benefit", 0.0, wyner_ziv_benefit},
    };
    int failed = 0;
    for (const auto &c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s)
        {
            o.pass = false;
            o.detail += format("; over the %.0f s limit", c.time_limit_s);
        }
        failed += !o.pass;
        std::printf("criterion %d %s: %s [%s] (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
