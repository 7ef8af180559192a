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

#include <algorithm>
#include <functional>
#include <vector>

namespace risil
{

/// Inner and outer radius of the set { sum_m g_m e^{j phi_m} }.
struct Annulus
{
    double inner{0.0};
    double outer{0.0};
};

/// Outer radius is the modulus sum; inner radius is max(largest - rest, 0).
inline Annulus annulus_radii(const RVec& moduli)
{
    require((moduli.array() >= 0.0).all(), "annulus_radii: moduli must be nonnegative");
    if (moduli.size() == 0)
        return {};
    const double total = moduli.sum();
    const double largest = moduli.maxCoeff();
    return {std::max(largest - (total - largest), 0.0), total};
}

inline Annulus annulus_radii(const CVec& u) { return annulus_radii(RVec(u.cwiseAbs())); }

/// Membership slack for |alpha_i| against [r_i, R_i].
inline constexpr double kBoundarySlack = 1e-9;

/// Whether a polygon with sides (moduli..., |target|) closes.
inline bool reachable(const RVec& moduli, cdouble target)
{
    const Annulus a = annulus_radii(moduli);
    const double mag = std::abs(target);
    return mag >= a.inner - kBoundarySlack && mag <= a.outer + kBoundarySlack;
}

enum class Verdict
{
    necessary_conditions_hold,
    infeasible
};

inline const char* to_string(Verdict v)
{
    return v == Verdict::infeasible ? "infeasible" : "necessary_conditions_hold";
}

/// Per-equation view of the zero-IL problem for a unit-modulus RIS.
struct FeasibilityReport
{
    CVec alpha;
    RVec inner_radii;
    RVec outer_radii;
    RVec margins;  // min(|alpha_i| - r_i, R_i - |alpha_i|)
    Verdict verdict{Verdict::necessary_conditions_hold};

    // Spectral gaps of Sigma's signal eigenvalues; an equation whose eigenvalue
    // sits within kDegenerateGap * lambda_max of a neighbour has a basis that
    // is not unique, so its annulus test is basis dependent.
    RVec eigenvalue_gaps;
    std::vector<int> near_degenerate;

    [[nodiscard]] double min_margin() const { return margins.size() ? margins.minCoeff() : 0.0; }
};

inline constexpr double kDegenerateGap = 1e-6;

/// Checks alpha_i against the annulus of each signal eigenvector.
inline FeasibilityReport check_annulus_conditions(const SubspaceDecomposition& dec, const CVec& alpha)
{
    const auto g = dec.U_signal.cols();
    require(alpha.size() == g, "check_annulus_conditions: alpha length must equal the signal dimension");

    FeasibilityReport rep;
    rep.alpha = alpha;
    rep.inner_radii.resize(g);
    rep.outer_radii.resize(g);
    rep.margins.resize(g);
    for (Eigen::Index i = 0; i < g; ++i)
    {
        const Annulus a = annulus_radii(CVec(dec.U_signal.col(i)));
        const double mag = std::abs(alpha(i));
        rep.inner_radii(i) = a.inner;
        rep.outer_radii(i) = a.outer;
        rep.margins(i) = std::min(mag - a.inner, a.outer - mag);
        if (rep.margins(i) < -kBoundarySlack)
            rep.verdict = Verdict::infeasible;
    }

    rep.eigenvalue_gaps = RVec::Zero(g);
    const double lmax = g > 0 ? dec.Lambda(0) : 0.0;
    for (Eigen::Index i = 0; i < g; ++i)
    {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0)
            gap = std::min(gap, dec.Lambda(i - 1) - dec.Lambda(i));
        if (i + 1 < g)
            gap = std::min(gap, dec.Lambda(i) - dec.Lambda(i + 1));
        // the last signal eigenvalue also neighbours the zero cluster
        if (i + 1 == g)
            gap = std::min(gap, dec.Lambda(i));
        rep.eigenvalue_gaps(i) = gap;
        if (gap < kDegenerateGap * lmax)
            rep.near_degenerate.push_back(static_cast<int>(i));
    }
    return rep;
}

}  // namespace risil
