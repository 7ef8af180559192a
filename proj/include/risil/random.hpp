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

#include "risil/types.hpp"

#include <cstdint>
#include <random>

namespace risil
{

/// Seed derivation for independent substreams.
///
/// Every random object in a realization (one channel matrix, one precoder,
/// one restart) draws from its own std::mt19937_64 whose seed is
/// `substream_seed(parent, tag)`. Tags are small integers assigned by the
/// caller; the same (parent, tag) pair always gives the same stream, so a
/// trial is reproducible no matter which thread executes it.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t parent, std::uint64_t tag)
{
    return splitmix64(splitmix64(parent) ^ splitmix64(tag + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t parent, std::uint64_t tag) { return Rng(substream_seed(parent, tag)); }

/// i.i.d. CN(0, variance) entries.
inline CMat complex_gaussian(Rng& rng, int rows, int cols, double variance = 1.0)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    CMat out(rows, cols);
    // column-major fill order is part of the reproducibility contract
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            out(r, c) = {re, im};
        }
    return out;
}

/// Random n x d matrix with orthonormal columns.
///
/// Thin Q factor of a complex Gaussian matrix, with the phase of each
/// column fixed so that diag(R) is real positive. This makes the result a
/// deterministic function of the Gaussian draw.
inline CMat random_semi_unitary(Rng& rng, int n, int d)
{
    require(d >= 1 && d <= n, "random_semi_unitary: need 1 <= d <= n");
    const CMat A = complex_gaussian(rng, n, d);
    Eigen::HouseholderQR<CMat> qr(A);
    CMat Q = qr.householderQ() * CMat::Identity(n, d);
    const CMat& R = qr.matrixQR();
    for (int j = 0; j < d; ++j)
    {
        const double mag = std::abs(R(j, j));
        if (mag > 0.0)
            Q.col(j) *= R(j, j) / mag;
    }
    return Q;
}

inline RVec uniform_phases(Rng& rng, int M)
{
    std::uniform_real_distribution<double> unif(-std::numbers::pi, std::numbers::pi);
    RVec theta(M);
    for (int m = 0; m < M; ++m)
        theta(m) = unif(rng);
    return theta;
}

}  // namespace risil
