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
#include <random>

#include "cranlab/dl_joint.hpp"
#include "cranlab/downlink.hpp"
#include "cranlab/quantizer_design.hpp"
#include "support/check.hpp"
#include "support/gaussian_oracle.hpp"

using namespace cranlab;
using testing::check_code;
using testing::rel_diff;

namespace
{

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
    std::mt19937_64 gen(seed ^ 0x5eedULL);
    base.cfg.noise_var_dl = std::uniform_real_distribution<double>(0.05, 1.0)(gen);
    DlInstance d{base.cfg, base.ch, oracle::random_plan(gen, base.cfg), base.q};
    if (correlated)
        d.q = oracle::random_correlated_q(gen, d.cfg);
    return d;
}

ClusterConfig scalar_cfg(std::size_t n_ue, std::size_t n_ru)
{
    return ClusterConfig::uniform(n_ue, n_ru, 1, 1, 10.0, 1.0);
}

DlSignalPlan scalar_plan(std::vector<double> powers, std::size_t n_ru = 1)
{
    std::vector<HermitianPsd> covs;
    for (double p : powers)
        covs.push_back(HermitianPsd::identity(n_ru, p));
    return {covs, {}, 1};
}

QuantizationConfig full_q(const ComplexMatrix &m, std::size_t block_dim)
{
    return {HermitianPsd(m), block_dim};
}

} // namespace

TEST_CASE("scalar downlink closed forms")
{
    auto cfg = scalar_cfg(1, 1);
    cfg.noise_var_dl = 1.0;
    const auto ch = make_reciprocal_channel(cfg, ComplexMatrix::Ones(1, 1));
    const auto plan = scalar_plan({1.0});
    const QuantizationConfig zero(HermitianPsd::zero(1), 1);
    const auto one = QuantizationConfig::isotropic(std::vector<double>{1.0}, 1);
    CHECK(dl_rate_linear(cfg, ch, plan, zero)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dl_rate_linear(cfg, ch, plan, one)[0] == doctest::Approx(std::log2(1.5)).epsilon(1e-14));
    CHECK(cranlab::dl_fronthaul_indep(plan, one)[0] == doctest::Approx(1.0).epsilon(1e-14));
    const auto coarse = QuantizationConfig::isotropic(std::vector<double>{1e7}, 1);
    CHECK(cranlab::dl_fronthaul_indep(plan, coarse)[0] < 1e-6);
    check_code(ErrorCode::SingularQuantizer, [&] { cranlab::dl_fronthaul_indep(plan, zero); });
}

TEST_CASE("quantization noise counted once or per user")
{
    auto cfg = scalar_cfg(2, 1);
    const auto ch = make_reciprocal_channel(cfg, ComplexMatrix::Ones(1, 2));
    const auto plan = scalar_plan({1.0, 1.0});
    const auto q = QuantizationConfig::isotropic(std::vector<double>{1.0}, 1);
    const auto once = dl_rate_linear(cfg, ch, plan, q);
    const auto literal = dl_rate_linear(cfg, ch, plan, q, QuantNoiseMode::per_user_literal);
    CHECK(once[0] == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-14));
    CHECK(literal[0] == doctest::Approx(std::log2(5.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("two correlated scalar RUs")
{
    const auto plan = scalar_plan({1.0}, 2);
    ComplexMatrix m(2, 2);
    m << 1.0, 0.5, 0.5, 1.0;
    const auto q = full_q(m, 1);
    const std::size_t order[] = {0, 1};
    const auto c = cranlab::dl_fronthaul_multivariate(plan, q, order);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(1.0 + std::log2(1.0 / 0.75)).epsilon(1e-14));
    CHECK(c[1] == doctest::Approx(1.415).epsilon(1e-3));
    check_code(ErrorCode::InvalidQuantizer, [&] { cranlab::dl_fronthaul_indep(plan, q); });
}

TEST_CASE("uncorrelated noise: multivariate equals independent")
{
    std::mt19937_64 gen(4);
    for (std::uint64_t seed = 0; seed < 30; ++seed)
    {
        const auto d = random_dl_instance(seed, false);
        const auto order = oracle::random_permutation(gen, d.cfg.n_ru);
        CHECK(cranlab::dl_fronthaul_multivariate(d.plan, d.q, order) == cranlab::dl_fronthaul_indep(d.plan, d.q));
    }
}

TEST_CASE("2 UE x 2 RU linear rates against entropy oracle")
{
    auto cfg = ClusterConfig::uniform(2, 2, 1, 2, 2.0, 0.5);
    cfg.noise_var_dl = 0.4;
    const auto ch = generate_channel(cfg, 21, DuplexMode::tdd_reciprocal);
    std::mt19937_64 gen(21);
    const auto plan = oracle::random_plan(gen, cfg);
    const auto q = oracle::random_correlated_q(gen, cfg);
    const auto got = dl_rate_linear(cfg, ch, plan, q);
    const auto expect = oracle::dl_linear(cfg, ch, plan, q);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(rel_diff(got[i], expect[i]) < 1e-9);
}

TEST_CASE("all downlink operations match the entropy oracle")
{
    std::mt19937_64 gen(99);
    for (std::uint64_t seed = 0; seed < 60; ++seed)
    {
        const auto d = random_dl_instance(seed, seed % 2 == 1);
        const auto ue_order = oracle::random_permutation(gen, d.cfg.n_ue);
        const auto ru_order = oracle::random_permutation(gen, d.cfg.n_ru);
        const auto diag = d.q.diagonal_part();
        const std::pair<std::vector<double>, std::vector<double>> pairs[] = {
            {dl_rate_linear(d.cfg, d.ch, d.plan, d.q), oracle::dl_linear(d.cfg, d.ch, d.plan, d.q)},
            {dl_rate_dpc(d.cfg, d.ch, d.plan, d.q, ue_order), oracle::dl_dpc(d.cfg, d.ch, d.plan, d.q, ue_order)},
            {cranlab::dl_fronthaul_indep(d.plan, diag), oracle::dl_fronthaul_indep(d.plan, diag)},
            {cranlab::dl_fronthaul_multivariate(d.plan, d.q, ru_order),
             oracle::dl_fronthaul_multivariate(d.plan, d.q, ru_order)},
        };
        for (const auto &[got, expect] : pairs)
        {
            REQUIRE(got.size() == expect.size());
            for (std::size_t k = 0; k < got.size(); ++k)
                CHECK(rel_diff(got[k], expect[k]) < 1e-9);
        }
    }
}

TEST_CASE("dirty-paper coding properties")
{
    std::mt19937_64 gen(23);
    for (std::uint64_t seed = 0; seed < 40; ++seed)
    {
        const auto d = random_dl_instance(seed, true);
        const auto order = oracle::random_permutation(gen, d.cfg.n_ue);
        const auto dpc = dl_rate_dpc(d.cfg, d.ch, d.plan, d.q, order);
        const auto lin = dl_rate_linear(d.cfg, d.ch, d.plan, d.q);
        // The first UE in the order sees every other UE as interference.
        CHECK(std::abs(dpc[order[0]] - lin[order[0]]) <= 1e-12 * std::max(1.0, lin[order[0]]));
        for (std::size_t i = 0; i < lin.size(); ++i)
        {
            CHECK(dpc[i] >= lin[i] - 1e-12);
            CHECK(dpc[i] >= 0.0);
        }

        // Each denominator is the next numerator.
        const auto inner = dl_dpc_inner_covariances(d.plan, d.q, order);
        REQUIRE(inner.size() == d.cfg.n_ue + 1);
        CHECK((inner.back().matrix() - d.q.covariance().matrix()).norm() == 0.0);
        for (std::size_t p = 0; p < d.cfg.n_ue; ++p)
        {
            const auto &next = d.plan.per_ue_tx_cov()[order[p]];
            CHECK((inner[p].matrix() - inner[p + 1].matrix() - next.matrix()).norm() <=
                  1e-12 * inner[p].matrix().norm());
        }
    }

    const auto single = random_dl_instance(7, false);
    if (single.cfg.n_ue == 1)
    {
        const std::size_t order[] = {0};
        CHECK(dl_rate_dpc(single.cfg, single.ch, single.plan, single.q, order) ==
              dl_rate_linear(single.cfg, single.ch, single.plan, single.q));
    }
    auto cfg = ClusterConfig::uniform(1, 2, 1, 2, 2.0);
    const auto ch = generate_channel(cfg, 3, DuplexMode::tdd_reciprocal);
    std::mt19937_64 g2(3);
    const auto plan = oracle::random_plan(g2, cfg);
    const auto q = oracle::random_correlated_q(g2, cfg);
    const std::size_t one[] = {0};
    CHECK(dl_rate_dpc(cfg, ch, plan, q, one)[0] == doctest::Approx(dl_rate_linear(cfg, ch, plan, q)[0]).epsilon(1e-14));
}

TEST_CASE("multivariate surcharge is non-negative and vanishes without cross terms")
{
    std::mt19937_64 gen(31);
    for (std::uint64_t seed = 0; seed < 50; ++seed)
    {
        const auto d = random_dl_instance(seed, true);
        const auto order = oracle::random_permutation(gen, d.cfg.n_ru);
        const auto multi = cranlab::dl_fronthaul_multivariate(d.plan, d.q, order);
        const auto indep = cranlab::dl_fronthaul_indep(d.plan, d.q.diagonal_part());
        for (std::size_t p = 0; p < order.size(); ++p)
        {
            const auto j = order[p];
            if (p == 0)
                CHECK(multi[j] == indep[j]);
            else
                CHECK(multi[j] > indep[j] - 1e-12);
        }
    }

    // Three scalar RUs, only RUs 0 and 2 correlated.
    const auto plan = scalar_plan({1.0}, 3);
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    m(0, 2) = m(2, 0) = 0.3;
    const auto q = full_q(m, 1);
    const std::size_t order[] = {0, 1, 2};
    const auto multi = cranlab::dl_fronthaul_multivariate(plan, q, order);
    const auto indep = cranlab::dl_fronthaul_indep(plan, q.diagonal_part());
    CHECK(multi[1] == indep[1]);
    CHECK(multi[2] - indep[2] == doctest::Approx(-std::log2(1.0 - 0.09)).epsilon(1e-12));
    const std::size_t reordered[] = {1, 2, 0};
    const auto r = cranlab::dl_fronthaul_multivariate(plan, q, reordered);
    CHECK(r[2] == indep[2]);
    CHECK(r[0] > indep[0]);
}

TEST_CASE("correlated quantization noise can beat any uncorrelated choice")
{
    // One single-antenna UE served coherently by two single-antenna RUs.
    auto cfg = ClusterConfig::uniform(1, 2, 1, 1, 10.0, 1.0);
    cfg.noise_var_dl = 0.1;
    const auto ch = make_reciprocal_channel(cfg, ComplexMatrix::Ones(2, 1));
    ComplexMatrix beam = ComplexMatrix::Ones(2, 2);
    const DlSignalPlan plan({HermitianPsd(beam)}, {}, 1);

    auto rate_at = [&](double rho) {
        ComplexMatrix m(2, 2);
        m << 1.0, rho, rho, 1.0;
        return dl_rate_linear(cfg, ch, plan, full_q(m, 1))[0];
    };
    const double uncorrelated = rate_at(0.0);
    double best = uncorrelated, best_rho = 0.0;
    for (int k = -99; k <= 99; ++k)
    {
        const double rho = k / 100.0;
        if (rate_at(rho) > best)
        {
            best = rate_at(rho);
            best_rho = rho;
        }
    }
    CHECK(best > uncorrelated + 1.0);
    CHECK(best_rho < 0.0);
}

TEST_CASE("rates and costs are non-negative")
{
    for (std::uint64_t seed = 200; seed < 240; ++seed)
    {
        const auto d = random_dl_instance(seed, true);
        const auto order = oracle::iota_n(d.cfg.n_ru);
        for (double v : dl_rate_linear(d.cfg, d.ch, d.plan, d.q))
            CHECK(v >= 0.0);
        for (double v : dl_rate_linear(d.cfg, d.ch, d.plan, d.q, QuantNoiseMode::per_user_literal))
            CHECK(v >= 0.0);
        for (double v : cranlab::dl_fronthaul_multivariate(d.plan, d.q, order))
            CHECK(v >= 0.0);
    }
}

TEST_CASE("zero-forcing plan")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        auto cfg = ClusterConfig::uniform(2, 3, 1, 2, 3.0, 0.2);
        cfg.noise_var_dl = 0.2;
        const auto ch = generate_channel(cfg, seed, DuplexMode::tdd_reciprocal);
        const auto plan = zero_forcing_plan(cfg, ch);
        CHECK(plan.within_budget(cfg.ru_power_budget()));
        double worst = 0.0;
        for (double p : plan.per_ru_power())
            worst = std::max(worst, p);
        CHECK(worst == doctest::Approx(cfg.ru_power_budget()).epsilon(1e-12));
        // Interference-free: DPC gains nothing.
        const auto q = QuantizationConfig::isotropic(std::vector<double>(3, 0.1), 2);
        const auto lin = dl_rate_linear(cfg, ch, plan, q);
        const auto dpc = dl_rate_dpc(cfg, ch, plan, q, plan.precoding_order());
        for (std::size_t i = 0; i < 2; ++i)
        {
            CHECK(lin[i] > 0.0);
            CHECK(std::abs(dpc[i] - lin[i]) < 1e-9);
        }
        CHECK(plan.precoding_order() == default_precoding_order(cfg, ch));
    }
}

TEST_CASE("evaluate_downlink")
{
    auto cfg = ClusterConfig::uniform(2, 2, 1, 2, 3.0, 0.2);
    cfg.noise_var_dl = 0.2;
    const auto ch = generate_channel(cfg, 11, DuplexMode::tdd_reciprocal);
    const auto plan = zero_forcing_plan(cfg, ch);
    std::mt19937_64 gen(11);
    const auto q = oracle::random_correlated_q(gen, cfg, 0.2);

    DownlinkStrategy multi{Precoding::dpc, DownlinkCompression::multivariate, {}, {}, QuantNoiseMode::once};
    const auto rep = evaluate_downlink(cfg, ch, plan, q, multi);
    const std::size_t order[] = {0, 1};
    CHECK(rep.per_ru_fronthaul == cranlab::dl_fronthaul_multivariate(plan, q, order));
    CHECK(rep.per_ue_rates == dl_rate_dpc(cfg, ch, plan, q, plan.precoding_order()));
    CHECK(rep.feasible == fronthaul_feasible(rep.per_ru_fronthaul, cfg.fronthaul_caps));

    DownlinkStrategy indep{};
    check_code(ErrorCode::InvalidQuantizer, [&] { evaluate_downlink(cfg, ch, plan, q, indep); });

    std::vector<HermitianPsd> loud;
    for (const auto &c : plan.per_ue_tx_cov())
        loud.push_back(c.scaled(1.5));
    const DlSignalPlan over(loud, {}, 2);
    check_code(ErrorCode::PowerBudgetExceeded, [&] { evaluate_downlink(cfg, ch, over, q.diagonal_part(), indep); });
}

TEST_CASE("downlink input validation")
{
    auto cfg = ClusterConfig::uniform(2, 2, 1, 2, 3.0);
    const auto ch = generate_channel(cfg, 1, DuplexMode::tdd_reciprocal);
    std::mt19937_64 gen(1);
    const auto plan = oracle::random_plan(gen, cfg);
    const auto q = QuantizationConfig::isotropic(std::vector<double>(3, 0.1), 2);
    check_code(ErrorCode::DimensionMismatch, [&] { dl_rate_linear(cfg, ch, plan, q); });
    check_code(ErrorCode::DimensionMismatch, [&] { DlSignalPlan({HermitianPsd::identity(3)}, {}, 2); });
    const std::size_t bad[] = {0, 0};
    const auto ok = QuantizationConfig::isotropic(std::vector<double>(2, 0.1), 2);
    check_code(ErrorCode::InvalidArgument, [&] { dl_rate_dpc(cfg, ch, plan, ok, bad); });

    // Singular conditioning block: RU 0 noise perfectly determined.
    const auto singular = QuantizationConfig(HermitianPsd::diagonal(std::vector<double>{0.0, 0.0, 1.0, 1.0}), 2);
    const std::size_t order[] = {0, 1};
    check_code(ErrorCode::SingularQuantizer, [&] { cranlab::dl_fronthaul_multivariate(plan, singular, order); });
}

TEST_CASE("multivariate design improves on independent fits")
{
    auto cfg = ClusterConfig::uniform(2, 3, 1, 1, 1.0, 0.1);
    cfg.noise_var_dl = 0.1;
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const auto ch = generate_channel(cfg, seed, DuplexMode::tdd_reciprocal);
        const auto plan = zero_forcing_plan(cfg, ch);
        const auto indep = fit_all_to_caps(cfg, ch, cfg.fronthaul_caps, FronthaulLink::dl_indep, {}, &plan).q;
        const auto order = oracle::iota_n(3);
        const auto design = design_multivariate_q(cfg, ch, plan, cfg.fronthaul_caps, order);
        const auto c = cranlab::dl_fronthaul_multivariate(plan, design.q, order);
        CHECK(fronthaul_feasible(c, cfg.fronthaul_caps));
        const double base = oracle::sum(dl_rate_linear(cfg, ch, plan, indep));
        const double multi = oracle::sum(dl_rate_linear(cfg, ch, plan, design.q));
        CHECK(multi >= base - 1e-9);
        wins += multi > base + 1e-6 ? 1 : 0;
    }
    CHECK(wins >= 5);
}

TEST_CASE("joint design heuristic never gets worse")
{
    auto cfg = ClusterConfig::uniform(2, 2, 1, 2, 2.0, 0.2);
    cfg.noise_var_dl = 0.2;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
    {
        const auto ch = generate_channel(cfg, seed, DuplexMode::tdd_reciprocal);
        JointDesignOptions opt;
        opt.ue_weights = {1.0, 2.0};
        const auto res = joint_design_heuristic(cfg, ch, cfg.fronthaul_caps, opt);
        REQUIRE(!res.history.empty());
        for (std::size_t k = 1; k < res.history.size(); ++k)
            CHECK(res.history[k] >= res.history[k - 1] - 1e-12);
        CHECK(res.objective == doctest::Approx(res.history.back()));
        CHECK(res.objective == doctest::Approx(res.rates[0] + 2.0 * res.rates[1]));
        CHECK(res.plan.within_budget(cfg.ru_power_budget()));
        CHECK(fronthaul_feasible(cranlab::dl_fronthaul_indep(res.plan, res.q), cfg.fronthaul_caps));
    }
}
