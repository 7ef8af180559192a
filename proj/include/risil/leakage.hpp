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

#include "risil/scenario.hpp"
#include "risil/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>
#include <vector>

namespace risil
{

/// Precoders V[l] (T_l x d_l) and decoders U[k] (R_k x d_k).
struct TxRxConfig
{
    std::vector<CMat> V;
    std::vector<CMat> U;

    [[nodiscard]] int users() const { return static_cast<int>(V.size()); }
    [[nodiscard]] int streams(int k) const { return static_cast<int>(V[k].cols()); }

    /// Largest ||X^H X - I||_F over all precoders and decoders.
    [[nodiscard]] double orthonormality_error() const
    {
        double err = 0.0;
        auto check = [&err](const CMat& X) {
            const auto d = X.cols();
            err = std::max(err, (X.adjoint() * X - CMat::Identity(d, d)).norm());
        };
        for (const auto& X : V)
            check(X);
        for (const auto& X : U)
            check(X);
        return err;
    }
};

/// Random semi-unitary precoders and decoders matching the geometry.
inline TxRxConfig random_txrx(const NetworkGeometry& geom, std::uint64_t seed)
{
    TxRxConfig cfg;
    for (int k = 0; k < geom.users(); ++k)
    {
        Rng rv = make_rng(seed, 0x40000ULL + k);
        cfg.V.push_back(random_semi_unitary(rv, geom.tx_antennas[k], geom.streams[k]));
        Rng ru = make_rng(seed, 0x50000ULL + k);
        cfg.U.push_back(random_semi_unitary(ru, geom.rx_antennas[k], geom.streams[k]));
    }
    return cfg;
}

namespace detail
{

inline void check_shapes(const ChannelSet& ch, const CVec& r)
{
    const int K = ch.users();
    require(static_cast<int>(ch.H.size()) == K && static_cast<int>(ch.F.size()) == K,
            "channel set: inconsistent user count");
    require(r.size() == ch.ris_elements(), "RIS vector length does not match channel set");
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k)
            require(ch.H[l][k].rows() == ch.F[k].cols() && ch.H[l][k].cols() == ch.G[l].cols() &&
                        ch.F[k].rows() == ch.G[l].rows(),
                    "channel set: shape mismatch for pair (" + std::to_string(l) + "," + std::to_string(k) + ")");
}

inline void check_shapes(const ChannelSet& ch, const TxRxConfig& txrx)
{
    const int K = ch.users();
    require(txrx.users() == K && static_cast<int>(txrx.U.size()) == K, "txrx: user count mismatch");
    for (int k = 0; k < K; ++k)
    {
        require(txrx.V[k].rows() == ch.G[k].cols(), "txrx: precoder " + std::to_string(k) + " has wrong row count");
        require(txrx.U[k].rows() == ch.F[k].cols(), "txrx: decoder " + std::to_string(k) + " has wrong row count");
        require(txrx.U[k].cols() == txrx.V[k].cols(), "txrx: user " + std::to_string(k) + " stream mismatch");
    }
}

}  // namespace detail

/// H[l][k] + F[k]^H diag(r) G[l].
inline CMat equivalent_channel(const ChannelSet& ch, const CVec& r, int l, int k)
{
    require(l >= 0 && k >= 0 && l < ch.users() && k < ch.users(), "equivalent_channel: user index out of range");
    detail::check_shapes(ch, r);
    return ch.H[l][k] + ch.F[k].adjoint() * r.asDiagonal() * ch.G[l];
}

/// Interference leakage evaluated directly from the equivalent channels.
inline double il_direct(const ChannelSet& ch, const TxRxConfig& txrx, const CVec& r)
{
    detail::check_shapes(ch, r);
    detail::check_shapes(ch, txrx);
    double il = 0.0;
    for (int l = 0; l < ch.users(); ++l)
        for (int k = 0; k < ch.users(); ++k)
            if (l != k)
                il += (txrx.U[k].adjoint() * equivalent_channel(ch, r, l, k) * txrx.V[l]).squaredNorm();
    return il;
}

/// IL(r) = tr(T) + r^H Sigma r + 2 Re(r^H s).
///
/// `T` is kept block-diagonal with one block sum_{k != l} Hb_lk^H Hb_lk per
/// transmitter l, so its trace equals the trace of the pairwise sum even
/// when the stream counts differ between users.
struct QuadraticForm
{
    CMat T;
    CVec s;
    CMat Sigma;
    int g{0};

    [[nodiscard]] int ris_elements() const { return static_cast<int>(s.size()); }
    [[nodiscard]] double trace_T() const { return T.trace().real(); }

    [[nodiscard]] double evaluate(const CVec& r) const
    {
        require(r.size() == s.size(), "QuadraticForm::evaluate: length mismatch");
        return trace_T() + r.dot(Sigma * r).real() + 2.0 * r.dot(s).real();
    }
};

/// Builds (T, s, Sigma) for fixed precoders and decoders.
inline QuadraticForm assemble_quadratic_form(const ChannelSet& ch, const TxRxConfig& txrx)
{
    detail::check_shapes(ch, CVec::Zero(ch.ris_elements()));
    detail::check_shapes(ch, txrx);
    const int K = ch.users();
    const int M = ch.ris_elements();

    std::vector<CMat> Fb(K), Gb(K);
    std::vector<int> offsets(K + 1, 0);
    for (int k = 0; k < K; ++k)
    {
        Fb[k] = ch.F[k] * txrx.U[k];
        Gb[k] = ch.G[k] * txrx.V[k];
        offsets[k + 1] = offsets[k] + txrx.streams(k);
    }

    QuadraticForm qf;
    qf.T = CMat::Zero(offsets[K], offsets[K]);
    qf.s = CVec::Zero(M);
    qf.Sigma = CMat::Zero(M, M);
    for (int l = 0; l < K; ++l)
    {
        const CMat QG = (Gb[l] * Gb[l].adjoint()).conjugate();
        for (int k = 0; k < K; ++k)
        {
            if (l == k)
                continue;
            const int dk = txrx.streams(k);
            const int dl = txrx.streams(l);
            require(M > std::max(dk, dl), "assemble_quadratic_form: need M > max(d_k, d_l) for pair (l=" +
                                              std::to_string(l) + ", k=" + std::to_string(k) + ")");
            const CMat Hb = txrx.U[k].adjoint() * ch.H[l][k] * txrx.V[l];
            qf.T.block(offsets[l], offsets[l], dl, dl) += Hb.adjoint() * Hb;
            qf.s += (Fb[k] * Hb * Gb[l].adjoint()).diagonal();
            qf.Sigma += (Fb[k] * Fb[k].adjoint()).cwiseProduct(QG);
            qf.g += dk * dl;
        }
    }
    return qf;
}

/// Exact factorization IL(r) = ||B r + h||^2 + offset.
///
/// Row (l, k, i, j) of B holds conj(Fb_k(:, i)) .* Gb_l(:, j) and the
/// matching entry of h is Hb_lk(i, j), so Sigma = B^H B and s = B^H h.
/// The optimizers work on this form because it evaluates IL without
/// cancellation and makes a coordinate update O(rows(B)).
struct LeakageFactor
{
    CMat B;
    CVec h;
    double offset{0.0};

    [[nodiscard]] int ris_elements() const { return static_cast<int>(B.cols()); }
    [[nodiscard]] double trace_T() const { return h.squaredNorm() + offset; }
    [[nodiscard]] double evaluate(const CVec& r) const { return (B * r + h).squaredNorm() + offset; }
};

inline LeakageFactor leakage_factor(const ChannelSet& ch, const TxRxConfig& txrx)
{
    detail::check_shapes(ch, CVec::Zero(ch.ris_elements()));
    detail::check_shapes(ch, txrx);
    const int K = ch.users();
    const int M = ch.ris_elements();
    int rows = 0;
    for (int l = 0; l < K; ++l)
        for (int k = 0; k < K; ++k)
            if (l != k)
                rows += txrx.streams(k) * txrx.streams(l);

    LeakageFactor f;
    f.B.resize(rows, M);
    f.h.resize(rows);
    int row = 0;
    for (int l = 0; l < K; ++l)
    {
        const CMat Gb = ch.G[l] * txrx.V[l];
        for (int k = 0; k < K; ++k)
        {
            if (l == k)
                continue;
            const CMat Fb = ch.F[k] * txrx.U[k];
            const CMat Hb = txrx.U[k].adjoint() * ch.H[l][k] * txrx.V[l];
            for (int j = 0; j < Gb.cols(); ++j)
                for (int i = 0; i < Fb.cols(); ++i)
                {
                    f.B.row(row) = Fb.col(i).conjugate().cwiseProduct(Gb.col(j)).transpose();
                    f.h(row) = Hb(i, j);
                    ++row;
                }
        }
    }
    return f;
}

/// Eigen-split of Sigma into signal (nonzero eigenvalues) and noise bases.
struct SubspaceDecomposition
{
    CMat U_signal;       // M x rank
    CMat U_noise;        // M x (M - rank)
    RVec Lambda;         // descending, strictly positive
    RVec eigenvalues;    // full spectrum, descending
    int expected_rank{0};  // g from the quadratic form
    int numerical_rank{0};

    [[nodiscard]] bool rank_matches() const { return numerical_rank == expected_rank; }
    [[nodiscard]] int ris_elements() const { return static_cast<int>(U_signal.rows()); }

    /// Basis [U_signal U_noise].
    [[nodiscard]] CMat basis() const
    {
        CMat U(U_signal.rows(), U_signal.cols() + U_noise.cols());
        U << U_signal, U_noise;
        return U;
    }
};

/// Relative eigenvalue threshold below which Sigma's spectrum counts as zero.
inline constexpr double kRankTolerance = 1e-9;

/// Eigendecomposition without the M > g requirement; the signal part is
/// whatever survives the rank tolerance.
inline SubspaceDecomposition decompose_spectrum(const QuadraticForm& qf)
{
    const int M = qf.ris_elements();
    require(qf.Sigma.rows() == M && qf.Sigma.cols() == M, "decompose: Sigma must be M x M");
    const CMat herm = 0.5 * (qf.Sigma + qf.Sigma.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> eig(herm);
    require(eig.info() == Eigen::Success, "decompose: eigensolver failed");

    // ascending from the solver; flip to descending
    const RVec values = eig.eigenvalues().reverse();
    const CMat vectors = eig.eigenvectors().rowwise().reverse();
    const double lmax = values.size() > 0 ? std::max(values(0), 0.0) : 0.0;
    int rank = 0;
    while (rank < M && lmax > 0.0 && values(rank) > kRankTolerance * lmax)
        ++rank;

    SubspaceDecomposition dec;
    dec.U_signal = vectors.leftCols(rank);
    dec.U_noise = vectors.rightCols(M - rank);
    dec.Lambda = values.head(rank);
    dec.eigenvalues = values;
    dec.expected_rank = qf.g;
    dec.numerical_rank = rank;
    return dec;
}

/// Signal/noise split of Sigma. Requires M > g.
inline SubspaceDecomposition decompose(const QuadraticForm& qf)
{
    require(qf.ris_elements() > qf.g, "decompose: need M > g (M=" + std::to_string(qf.ris_elements()) +
                                          ", g=" + std::to_string(qf.g) + ")");
    return decompose_spectrum(qf);
}

/// Factor of a bare quadratic form, built from its decomposition:
/// B = Lambda^{1/2} U_signal^H and h = Lambda^{-1/2} U_signal^H s.
inline LeakageFactor factor_from_decomposition(const QuadraticForm& qf, const SubspaceDecomposition& dec)
{
    LeakageFactor f;
    const RVec sq = dec.Lambda.cwiseSqrt();
    f.B = sq.asDiagonal() * dec.U_signal.adjoint();
    f.h = sq.cwiseInverse().asDiagonal() * (dec.U_signal.adjoint() * qf.s);
    f.offset = std::max(0.0, qf.trace_T() - f.h.squaredNorm());
    return f;
}

/// Quadratic form of an explicit factor: Sigma = B^H B, s = B^H h, tr T = ||h||^2 + offset.
inline QuadraticForm quadratic_form_from_factor(const LeakageFactor& f, int g)
{
    QuadraticForm qf;
    qf.Sigma = f.B.adjoint() * f.B;
    qf.s = f.B.adjoint() * f.h;
    qf.T = CMat::Constant(1, 1, cdouble(f.h.squaredNorm() + f.offset, 0.0));
    qf.g = g;
    return qf;
}

}  // namespace risil
