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

#include "risil/leakage.hpp"
#include "risil/ris_optimizer.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

using namespace risil;
using namespace risil::testing;

TEST_CASE("equivalent_channel")
{
    const Dims dims{2, 2, 1, 5};
    ChannelSet ch = random_channels(dims, 11);
    const CVec r = random_vector(5, 12);

    SECTION("zero RIS returns the direct channel")
    {
        CHECK(equivalent_channel(ch, CVec::Zero(5), 0, 1) == ch.H[0][1]);
    }
    SECTION("zero RIS-to-receiver channel returns the direct channel")
    {
        ch.F[1].setZero();
        CHECK((equivalent_channel(ch, r, 0, 1) - ch.H[0][1]).norm() == 0.0);
    }
    SECTION("matches the elementwise sum H + sum_m r_m conj(f_m) g_m^T")
    {
        CMat expected = ch.H[1][0];
        for (int m = 0; m < 5; ++m)
            expected += r(m) * ch.F[0].row(m).adjoint() * ch.G[1].row(m);
        CHECK((equivalent_channel(ch, r, 1, 0) - expected).norm() <= 1e-13 * expected.norm());
    }
    SECTION("shape errors")
    {
        CHECK_THROWS_AS(equivalent_channel(ch, CVec::Zero(4), 0, 1), DomainError);
        CHECK_THROWS_AS(equivalent_channel(ch, r, 0, 2), DomainError);
    }
}

TEST_CASE("il_direct edge cases")
{
    const Dims dims{3, 2, 1, 6};
    ChannelSet ch = random_channels(dims, 1);
    const TxRxConfig cfg = random_config(dims, 2);
    const CVec r = random_vector(6, 3);

    CHECK(il_direct(ch, cfg, r) > 0.0);
    CHECK_THAT(il_direct(ch, cfg, r), Catch::Matchers::WithinRel(brute_force_il(ch, cfg, r), 1e-12));

    SECTION("all channels zero")
    {
        for (auto& row : ch.H)
            for (auto& h : row)
                h.setZero();
        for (auto& g : ch.G)
            g.setZero();
        CHECK(il_direct(ch, cfg, r) == 0.0);
    }
    SECTION("single user has no leakage")
    {
        const Dims one{1, 2, 1, 6};
        CHECK(il_direct(random_channels(one, 4), random_config(one, 5), r) == 0.0);
    }
}

TEST_CASE("quadratic form equals direct IL")
{
    for (const Dims dims : {Dims{2, 2, 1, 6}, Dims{3, 2, 1, 9}, Dims{3, 3, 2, 30}})
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed)
        {
            const ChannelSet ch = random_channels(dims, 100 + seed);
            const TxRxConfig cfg = random_config(dims, 200 + seed);
            const QuadraticForm qf = assemble_quadratic_form(ch, cfg);
            for (int trial = 0; trial < 20; ++trial)
            {
                const CVec r = random_vector(dims.M, 1000 * seed + trial);
                const double direct = il_direct(ch, cfg, r);
                CHECK(std::abs(direct - qf.evaluate(r)) <= 1e-10 * std::max(1.0, direct));
            }
        }
    }
}

TEST_CASE("Sigma is the Hadamard sum and the factor reproduces it")
{
    const Dims dims{3, 3, 2, 12};
    const ChannelSet ch = random_channels(dims, 7);
    const TxRxConfig cfg = random_config(dims, 8);
    const QuadraticForm qf = assemble_quadratic_form(ch, cfg);

    // entrywise: Sigma(m, n) = sum_{l != k} (Fb Fb^H)(m, n) * conj((Gb Gb^H)(m, n))
    CMat expected = CMat::Zero(12, 12);
    for (int l = 0; l < 3; ++l)
        for (int k = 0; k < 3; ++k)
        {
            if (l == k)
                continue;
            const CMat Fb = ch.F[k] * cfg.U[k];
            const CMat Gb = ch.G[l] * cfg.V[l];
            for (int m = 0; m < 12; ++m)
                for (int n = 0; n < 12; ++n)
                {
                    cdouble qfk = 0.0, qgl = 0.0;
                    for (int i = 0; i < 2; ++i)
                    {
                        qfk += Fb(m, i) * std::conj(Fb(n, i));
                        qgl += Gb(m, i) * std::conj(Gb(n, i));
                    }
                    expected(m, n) += qfk * std::conj(qgl);
                }
        }
    CHECK((qf.Sigma - expected).cwiseAbs().maxCoeff() <= 1e-12);

    const LeakageFactor f = leakage_factor(ch, cfg);
    CHECK((f.B.adjoint() * f.B - qf.Sigma).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((f.B.adjoint() * f.h - qf.s).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(f.trace_T() - qf.trace_T()) <= 1e-12 * qf.trace_T());
}

TEST_CASE("Sigma is Hermitian PSD with s in its column span")
{
    const Dims dims{3, 3, 2, 40};
    const ChannelSet ch = random_channels(dims, 21);
    const QuadraticForm qf = assemble_quadratic_form(ch, random_config(dims, 22));
    CHECK((qf.Sigma - qf.Sigma.adjoint()).norm() <= 1e-10 * qf.Sigma.norm());

    const SubspaceDecomposition dec = decompose(qf);
    CHECK(dec.eigenvalues.minCoeff() >= -1e-10 * dec.eigenvalues.maxCoeff());
    const CVec outside = qf.s - dec.U_signal * (dec.U_signal.adjoint() * qf.s);
    CHECK(outside.norm() <= 1e-9 * qf.s.norm());
}

TEST_CASE("zero direct channels give zero trace and zero s")
{
    const Dims dims{2, 2, 1, 6};
    ChannelSet ch = random_channels(dims, 5);
    for (auto& row : ch.H)
        for (auto& h : row)
            h.setZero();
    const QuadraticForm qf = assemble_quadratic_form(ch, random_config(dims, 6));
    CHECK(qf.trace_T() == 0.0);
    CHECK(qf.s.norm() == 0.0);
}

TEST_CASE("assemble_quadratic_form enforces M > max(d_k, d_l)")
{
    const Dims dims{2, 3, 2, 2};
    const ChannelSet ch = random_channels(dims, 1);
    const TxRxConfig cfg = random_config(dims, 2);
    CHECK_THROWS_WITH(assemble_quadratic_form(ch, cfg), Catch::Matchers::ContainsSubstring("pair (l=0, k=1)"));
}

TEST_CASE("rank of Sigma equals g on the (3x3, 2)^3 network")
{
    const NetworkGeometry geom = default_geometry(3, 60);
    FadingSpec fs;
    fs.reference_path_loss_db = default_reference_path_loss_db();
    const ChannelSet ch = sample_channels(geom, fs, 4);
    const QuadraticForm qf = assemble_quadratic_form(ch, random_txrx(geom, 5));
    REQUIRE(qf.g == 24);
    const SubspaceDecomposition dec = decompose(qf);
    CHECK(dec.numerical_rank == 24);
    CHECK(dec.rank_matches());
    // the noise eigenvalues sit below the rank tolerance
    CHECK(dec.eigenvalues.tail(60 - 24).cwiseAbs().maxCoeff() <= 1e-9 * dec.eigenvalues(0));
}

TEST_CASE("decompose")
{
    SECTION("identity truncated to rank g")
    {
        QuadraticForm qf;
        qf.Sigma = CMat::Zero(6, 6);
        qf.Sigma.topLeftCorner(3, 3).setIdentity();
        qf.s = CVec::Zero(6);
        qf.T = CMat::Zero(1, 1);
        qf.g = 3;
        const SubspaceDecomposition dec = decompose(qf);
        CHECK(dec.numerical_rank == 3);
        CHECK((dec.Lambda - RVec::Ones(3)).norm() <= 1e-14);
    }
    SECTION("rank mismatch is reported, not thrown")
    {
        QuadraticForm qf;
        qf.Sigma = CMat::Identity(5, 5);
        qf.Sigma(4, 4) = 0.0;
        qf.s = CVec::Zero(5);
        qf.T = CMat::Zero(1, 1);
        qf.g = 2;
        const SubspaceDecomposition dec = decompose(qf);
        CHECK(dec.numerical_rank == 4);
        CHECK_FALSE(dec.rank_matches());
    }
    SECTION("g >= M is rejected")
    {
        QuadraticForm qf;
        qf.Sigma = CMat::Identity(4, 4);
        qf.s = CVec::Zero(4);
        qf.T = CMat::Zero(1, 1);
        qf.g = 4;
        CHECK_THROWS_AS(decompose(qf), DomainError);
    }
}

TEST_CASE("decomposition reconstructs Sigma on random instances")
{
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Dims dims{3, 2, 1, 10 + static_cast<int>(seed % 7)};
        const QuadraticForm qf = assemble_quadratic_form(random_channels(dims, seed), random_config(dims, seed + 500));
        const SubspaceDecomposition dec = decompose(qf);
        const CMat rebuilt = dec.U_signal * dec.Lambda.asDiagonal() * dec.U_signal.adjoint();
        const CMat U = dec.basis();
        const double unitary_err = (U.adjoint() * U - CMat::Identity(U.cols(), U.cols())).norm();
        if ((qf.Sigma - rebuilt).norm() > 1e-8 * qf.Sigma.norm() || unitary_err > 1e-10 || !dec.rank_matches())
            ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("shifted form (r - r_unc)^H Sigma (r - r_unc) equals IL")
{
    const Dims dims{3, 2, 1, 12};
    const ChannelSet ch = random_channels(dims, 31);
    const TxRxConfig cfg = random_config(dims, 32);
    const QuadraticForm qf = assemble_quadratic_form(ch, cfg);
    const CVec r_unc = active_solve(qf, decompose(qf)).ris.r;
    for (int trial = 0; trial < 20; ++trial)
    {
        const CVec r = random_unit(12, 40 + trial).r;
        const CVec d = r - r_unc;
        const double shifted = d.dot(qf.Sigma * d).real();
        const double direct = il_direct(ch, cfg, r);
        CHECK(std::abs(shifted - direct) <= 1e-9 * std::max(1.0, direct));
    }
}
