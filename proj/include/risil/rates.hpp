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
#include "risil/types.hpp"

#include <utility>
#include <vector>

namespace risil
{

/// Per-user transmit power and receiver noise power, both in watts.
///
/// The SNR axis is SNR_dB = 10 log10(P / sigma^2) with sigma^2 = 1, so
/// `from_snr_db` sets P = 10^(SNR/10).
struct LinkBudget
{
    double tx_power{1.0};
    double noise_power{1.0};

    static LinkBudget from_snr_db(double snr_db) { return {std::pow(10.0, snr_db / 10.0), 1.0}; }

    void validate() const
    {
        require(tx_power > 0.0, "LinkBudget: tx_power must be positive");
        require(noise_power > 0.0, "LinkBudget: noise_power must be positive");
    }
};

/// Rate of user k with Gaussian inputs, equal power per stream and residual
/// interference treated as noise at the decoder output.
inline double user_rate(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r, const LinkBudget& budget, int k)
{
    const int K = ch.users();
    const int dk = txrx.streams(k);
    const CMat& Uk = txrx.U[k];

    CMat interference = budget.noise_power * CMat::Identity(dk, dk);
    for (int l = 0; l < K; ++l)
    {
        if (l == k)
            continue;
        const CMat A = Uk.adjoint() * equivalent_channel(ch, r, l, k) * txrx.V[l];
        interference += (budget.tx_power / txrx.streams(l)) * A * A.adjoint();
    }
    const CMat D = Uk.adjoint() * equivalent_channel(ch, r, k, k) * txrx.V[k];
    const CMat signal = (budget.tx_power / dk) * D * D.adjoint();

    Eigen::LLT<CMat> llt(interference);
    require(llt.info() == Eigen::Success, "sum_rate: interference-plus-noise covariance is singular");
    const CMat W = CMat::Identity(dk, dk) + llt.solve(signal);
    // det(I + N^{-1} S) is real positive; the LU determinant carries rounding in the imaginary part
    const double det = std::abs(W.determinant());
    return std::log2(det);
}

/// Sum over users of user_rate, in bits/s/Hz.
inline double sum_rate(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r, const LinkBudget& budget)
{
    budget.validate();
    detail::check_shapes(ch, r);
    detail::check_shapes(ch, txrx);
    double total = 0.0;
    for (int k = 0; k < ch.users(); ++k)
        total += user_rate(ch, txrx, r, budget, k);
    return std::max(total, 0.0);
}

/// Sum rate with all cross links ignored (what zero IL delivers).
inline double interference_free_sum_rate(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r,
                                         const LinkBudget& budget)
{
    budget.validate();
    double total = 0.0;
    for (int k = 0; k < ch.users(); ++k)
    {
        const int dk = txrx.streams(k);
        const CMat D = txrx.U[k].adjoint() * equivalent_channel(ch, r, k, k) * txrx.V[k];
        const CMat W = CMat::Identity(dk, dk) + (budget.tx_power / (dk * budget.noise_power)) * D * D.adjoint();
        total += std::log2(std::abs(W.determinant()));
    }
    return total;
}

struct CurvePoint
{
    double snr_db;
    double rate;
};

/// Least-squares slope over the top 10 dB of a rate curve, in bits/s/Hz per 3 dB.
inline double dof_slope(std::vector<CurvePoint> curve)
{
    require(curve.size() >= 2, "dof_slope: need at least two points");
    double top = curve.front().snr_db;
    for (const auto& p : curve)
        top = std::max(top, p.snr_db);
    std::vector<CurvePoint> window;
    for (const auto& p : curve)
        if (p.snr_db >= top - 10.0 - 1e-9)
            window.push_back(p);
    require(window.size() >= 2, "dof_slope: need at least two points in the top 10 dB");

    double mx = 0.0, my = 0.0;
    for (const auto& p : window)
    {
        mx += p.snr_db;
        my += p.rate;
    }
    mx /= static_cast<double>(window.size());
    my /= static_cast<double>(window.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : window)
    {
        sxy += (p.snr_db - mx) * (p.rate - my);
        sxx += (p.snr_db - mx) * (p.snr_db - mx);
    }
    require(sxx > 0.0, "dof_slope: SNR values in the window are all equal");
    return 3.0 * sxy / sxx;
}

}  // namespace risil
