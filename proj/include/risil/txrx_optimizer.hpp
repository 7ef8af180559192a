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

#pragma once

#include "risil/leakage.hpp"
#include "risil/ris_optimizer.hpp"
#include "risil/types.hpp"

#include <vector>

namespace risil
{

namespace detail
{

/// Orthonormal basis of the d least-dominant eigenvectors of a Hermitian matrix.
inline CMat least_dominant_subspace(const CMat& Q, int d)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (Q + Q.adjoint()));
    require(eig.info() == Eigen::Success, "least_dominant_subspace: eigensolver failed");
    return eig.eigenvectors().leftCols(d);
}

}  // namespace detail

/// Step 1: U_k spans the d_k weakest directions of the interference covariance
/// sum_{l != k} Ht_lk V_l V_l^H Ht_lk^H, with Ht the RIS-equivalent channel.
inline TxRxConfig update_decoders(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r)
{
    detail::check_shapes(ch, txrx);
    TxRxConfig out = txrx;
    const int K = ch.users();
    for (int k = 0; k < K; ++k)
    {
        const auto Rk = ch.F[k].cols();
        CMat Q = CMat::Zero(Rk, Rk);
        for (int l = 0; l < K; ++l)
        {
            if (l == k)
                continue;
            const CMat HV = equivalent_channel(ch, r, l, k) * txrx.V[l];
            Q += HV * HV.adjoint();
        }
        out.U[k] = detail::least_dominant_subspace(Q, txrx.streams(k));
    }
    return out;
}

/// Step 2: reciprocal network. V_l spans the d_l weakest directions of
/// sum_{k != l} Ht_lk^H U_k U_k^H Ht_lk.
inline TxRxConfig update_precoders(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r)
{
    detail::check_shapes(ch, txrx);
    TxRxConfig out = txrx;
    const int K = ch.users();
    for (int l = 0; l < K; ++l)
    {
        const auto Tl = ch.G[l].cols();
        CMat Q = CMat::Zero(Tl, Tl);
        for (int k = 0; k < K; ++k)
        {
            if (k == l)
                continue;
            const CMat UH = txrx.U[k].adjoint() * equivalent_channel(ch, r, l, k);
            Q += UH.adjoint() * UH;
        }
        out.V[l] = detail::least_dominant_subspace(Q, txrx.streams(l));
    }
    return out;
}

enum class RisStep
{
    fixed,  // RIS held at r0
    active,
    unit_modulus
};

struct AlternationSchedule
{
    int max_cycles{50};
    RisStep ris_step{RisStep::unit_modulus};
    BcdOptions bcd{};
    double tol{1e-12};        // relative IL decrease per cycle
    double il_target{0.0};    // stop once IL drops below this, 0 disables
};

struct AlternationResult
{
    TxRxConfig txrx;
    RisVector ris;
    std::vector<double> trajectory;  // IL at start, then after every step
    int cycles{0};
};

/// Decoders, precoders, RIS, repeated. Every step is an exact or
/// descent-only minimization, so the trajectory is nonincreasing.
inline AlternationResult alternate_full(const ChannelSet& ch, const TxRxConfig& txrx0, const RisVector& r0,
                                        const AlternationSchedule& schedule)
{
    require(schedule.ris_step != RisStep::unit_modulus || r0.mode == RisMode::unit_modulus,
            "alternate_full: unit-modulus schedule needs a unit-modulus start");
    AlternationResult res{txrx0, r0, {}, 0};
    double il = il_direct(ch, res.txrx, res.ris.r);
    res.trajectory.push_back(il);

    auto reached = [&](double value) {
        return value == 0.0 || (schedule.il_target > 0.0 && value < schedule.il_target);
    };
    if (reached(il))
        return res;

    for (int cycle = 0; cycle < schedule.max_cycles; ++cycle)
    {
        const double start = il;
        res.txrx = update_decoders(ch, res.txrx, res.ris.r);
        res.trajectory.push_back(il_direct(ch, res.txrx, res.ris.r));
        res.txrx = update_precoders(ch, res.txrx, res.ris.r);
        il = il_direct(ch, res.txrx, res.ris.r);
        res.trajectory.push_back(il);

        if (schedule.ris_step == RisStep::unit_modulus)
        {
            const LeakageFactor f = leakage_factor(ch, res.txrx);
            auto [r, rep] = bcd_solve(f, res.ris, schedule.bcd);
            res.ris = std::move(r);
            il = rep.final_il;
        }
        else if (schedule.ris_step == RisStep::active)
        {
            res.ris = active_minimizer(assemble_quadratic_form(ch, res.txrx)).ris;
            il = il_direct(ch, res.txrx, res.ris.r);
        }
        res.trajectory.push_back(il);
        ++res.cycles;
        if (reached(il) || start - il < schedule.tol * il)
            break;
    }
    return res;
}

}  // namespace risil
