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

// Random instance generators and brute-force oracles shared by the tests.
// Nothing here calls into the optimizers it is used to check.

#include "risil/risil.hpp"

#include <vector>

namespace risil::testing
{

struct Dims
{
    int K;
    int antennas;  // T_k = R_k
    int streams;   // d_k
    int M;
};

/// Unit-variance i.i.d. Gaussian channels, no geometry.
inline ChannelSet random_channels(const Dims& d, std::uint64_t seed)
{
    ChannelSet ch;
    ch.H.resize(d.K);
    for (int l = 0; l < d.K; ++l)
        for (int k = 0; k < d.K; ++k)
        {
            Rng rng = make_rng(seed, 100 + 16 * l + k);
            ch.H[l].push_back(complex_gaussian(rng, d.antennas, d.antennas));
        }
    for (int k = 0; k < d.K; ++k)
    {
        Rng rg = make_rng(seed, 1000 + k);
        ch.G.push_back(complex_gaussian(rg, d.M, d.antennas));
        Rng rf = make_rng(seed, 2000 + k);
        ch.F.push_back(complex_gaussian(rf, d.M, d.antennas));
    }
    return ch;
}

inline TxRxConfig random_config(const Dims& d, std::uint64_t seed)
{
    TxRxConfig cfg;
    for (int k = 0; k < d.K; ++k)
    {
        Rng rv = make_rng(seed, 3000 + k);
        cfg.V.push_back(random_semi_unitary(rv, d.antennas, d.streams));
        Rng ru = make_rng(seed, 4000 + k);
        cfg.U.push_back(random_semi_unitary(ru, d.antennas, d.streams));
    }
    return cfg;
}

inline CVec random_vector(int n, std::uint64_t seed)
{
    Rng rng = make_rng(seed, 5000);
    return complex_gaussian(rng, n, 1).col(0);
}

inline RisVector random_unit(int M, std::uint64_t seed)
{
    Rng rng = make_rng(seed, 6000);
    return RisVector::from_phases(uniform_phases(rng, M));
}

/// IL summed entry by entry with explicit loops over RIS elements.
inline double brute_force_il(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r)
{
    double il = 0.0;
    const int K = ch.users();
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k)
        {
            if (l == k)
                continue;
            const auto Rk = ch.H[l][k].rows();
            const auto Tl = ch.H[l][k].cols();
            CMat Ht(Rk, Tl);
            for (Eigen::Index a = 0; a < Rk; ++a)
                for (Eigen::Index b = 0; b < Tl; ++b)
                {
                    cdouble acc = ch.H[l][k](a, b);
                    for (Eigen::Index m = 0; m < r.size(); ++m)
                        acc += std::conj(ch.F[k](m, a)) * r(m) * ch.G[l](m, b);
                    Ht(a, b) = acc;
                }
            const CMat X = txrx.U[k].adjoint() * Ht * txrx.V[l];
            for (Eigen::Index a = 0; a < X.rows(); ++a)
                for (Eigen::Index b = 0; b < X.cols(); ++b)
                    il += std::norm(X(a, b));
        }
    return il;
}

/// Feasible M = 2, g = 1 quadratic form: Sigma = lambda u u^H and
/// s = -Sigma r_star for a random unit-modulus r_star, so IL(r_star) = 0.
struct M2Instance
{
    QuadraticForm qf;
    RisVector r_star;
};

inline M2Instance feasible_m2_instance(std::uint64_t seed)
{
    Rng rng = make_rng(seed, 7000);
    CVec u = complex_gaussian(rng, 2, 1).col(0);
    u.normalize();
    std::uniform_real_distribution<double> unif(0.5, 3.0);
    const double lambda = unif(rng);
    const RisVector r_star = RisVector::from_phases(uniform_phases(rng, 2));
    LeakageFactor f;
    f.B = std::sqrt(lambda) * u.adjoint();
    f.h = -(f.B * r_star.r);
    return {quadratic_form_from_factor(f, 1), r_star};
}

/// Smallest angular distance between two unit-modulus vectors, elementwise max.
inline double phase_distance(const CVec& a, const CVec& b)
{
    double worst = 0.0;
    for (Eigen::Index m = 0; m < a.size(); ++m)
        worst = std::max(worst, std::abs(wrap_phase(std::arg(a(m)) - std::arg(b(m)))));
    return worst;
}

/// Orthogonal projector onto the column span of an orthonormal X.
inline CMat projector(const CMat& X) { return X * X.adjoint(); }

}  // namespace risil::testing
