// SPDX-License-Identifier: Apache-2.0
//
// risil - interference leakage minimization for RIS-assisted MIMO interference channels
// Copyright (C) 2026 The risil authors
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

#include "risil/rates.hpp"
#include "risil/ris_optimizer.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace risil;
using namespace risil::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("scalar interference-free link reduces to log2(1 + P|h|^2 / sigma^2)")
{
    const Dims dims{1, 1, 1, 3};
    ChannelSet ch = random_channels(dims, 1);
    TxRxConfig cfg;
    cfg.V = {CMat::Ones(1, 1)};
    cfg.U = {CMat::Ones(1, 1)};
    const CVec r = CVec::Zero(3);
    const LinkBudget b{4.0, 0.5};
    const double expected = std::log2(1.0 + 4.0 * std::norm(ch.H[0][0](0, 0)) / 0.5);
    CHECK_THAT(sum_rate(ch, cfg, r, b), WithinRel(expected, 1e-12));
    CHECK_THAT(interference_free_sum_rate(ch, cfg, r, b), WithinRel(expected, 1e-12));
}

TEST_CASE("sum rate vanishes as the noise grows")
{
    const Dims dims{3, 2, 1, 4};
    const ChannelSet ch = random_channels(dims, 2);
    const TxRxConfig cfg = random_config(dims, 3);
    const CVec r = random_unit(4, 4).r;
    CHECK(sum_rate(ch, cfg, r, LinkBudget{1.0, 1e12}) <= 1e-9);
}

TEST_CASE("zero IL gives the interference-free rate")
{
    // active RIS zeroes the leakage when M > g
    const Dims dims{3, 3, 2, 30};
    const ChannelSet ch = random_channels(dims, 5);
    const TxRxConfig cfg = random_config(dims, 6);
    const QuadraticForm qf = assemble_quadratic_form(ch, cfg);
    const CVec r = active_minimizer(qf).ris.r;
    REQUIRE(il_direct(ch, cfg, r) <= 1e-18 * qf.trace_T());
    for (double snr : {0.0, 20.0, 40.0})
    {
        const LinkBudget b = LinkBudget::from_snr_db(snr);
        CHECK_THAT(sum_rate(ch, cfg, r, b), WithinRel(interference_free_sum_rate(ch, cfg, r, b), 1e-9));
    }
}

TEST_CASE("interference only lowers the rate")
{
    const Dims dims{3, 2, 1, 4};
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
        const ChannelSet ch = random_channels(dims, seed);
        const TxRxConfig cfg = random_config(dims, seed + 1);
        const CVec r = random_unit(4, seed + 2).r;
        const LinkBudget b = LinkBudget::from_snr_db(10.0);
        CHECK(sum_rate(ch, cfg, r, b) <= interference_free_sum_rate(ch, cfg, r, b));
    }
}

TEST_CASE("interference-free rate increases with power")
{
    const Dims dims{2, 3, 2, 4};
    const ChannelSet ch = random_channels(dims, 7);
    const TxRxConfig cfg = random_config(dims, 8);
    const CVec r = random_unit(4, 9).r;
    double prev = -1.0;
    for (double snr = -10.0; snr <= 50.0; snr += 5.0)
    {
        const double v = interference_free_sum_rate(ch, cfg, r, LinkBudget::from_snr_db(snr));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("link budget")
{
    const LinkBudget b = LinkBudget::from_snr_db(30.0);
    CHECK_THAT(b.tx_power, WithinRel(1000.0, 1e-12));
    CHECK(b.noise_power == 1.0);
    CHECK_THROWS_AS((LinkBudget{0.0, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((LinkBudget{1.0, -1.0}.validate()), DomainError);
}

TEST_CASE("dof_slope")
{
    SECTION("linear curve with 2 bits per 3 dB per stream for 3 streams")
    {
        std::vector<CurvePoint> c;
        for (double s = 0.0; s <= 40.0; s += 5.0)
            c.push_back({s, 2.0 * s});  // 2 bits per dB = 6 bits per 3 dB
        CHECK_THAT(dof_slope(c), WithinAbs(6.0, 1e-12));
    }
    SECTION("only the top 10 dB count")
    {
        std::vector<CurvePoint> c;
        for (double s = 0.0; s <= 40.0; s += 5.0)
            c.push_back({s, s < 30.0 ? s : 30.0});
        CHECK_THAT(dof_slope(c), WithinAbs(0.0, 1e-12));
    }
    SECTION("input order does not matter")
    {
        std::vector<CurvePoint> c{{40.0, 10.0}, {30.0, 8.0}, {35.0, 9.0}, {0.0, 0.0}};
        CHECK_THAT(dof_slope(c), WithinAbs(3.0 * 0.2, 1e-12));
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(dof_slope({{10.0, 1.0}}), DomainError);
        CHECK_THROWS_AS(dof_slope({{40.0, 1.0}, {0.0, 1.0}}), DomainError);
    }
}
