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

#include "risil/random.hpp"
#include "risil/types.hpp"

#include <cstdint>
#include <vector>

namespace risil
{

/// Node placement and dimensions of a K-user RIS-assisted MIMO IC.
struct NetworkGeometry
{
    std::vector<Vec3> tx_positions;  // meters
    std::vector<Vec3> rx_positions;  // meters
    Vec3 ris_position{Vec3::Zero()};
    std::vector<int> tx_antennas;  // T_k
    std::vector<int> rx_antennas;  // R_k
    std::vector<int> streams;      // d_k
    int ris_elements{1};           // M

    [[nodiscard]] int users() const { return static_cast<int>(tx_positions.size()); }

    /// g = sum over l != k of d_k d_l.
    [[nodiscard]] int interference_dimension() const
    {
        int g = 0;
        for (int l = 0; l < users(); ++l)
            for (int k = 0; k < users(); ++k)
                if (l != k)
                    g += streams[l] * streams[k];
        return g;
    }

    void validate() const
    {
        const auto K = tx_positions.size();
        require(K >= 2, "geometry: need at least two users");
        require(rx_positions.size() == K && tx_antennas.size() == K && rx_antennas.size() == K &&
                    streams.size() == K,
                "geometry: all per-user lists must have length K");
        require(ris_elements >= 1, "geometry: need at least one RIS element");
        for (std::size_t k = 0; k < K; ++k)
        {
            require(tx_antennas[k] >= 1 && rx_antennas[k] >= 1, "geometry: antenna counts must be positive");
            require(streams[k] >= 1 && streams[k] <= std::min(tx_antennas[k], rx_antennas[k]),
                    "geometry: need 1 <= d_k <= min(T_k, R_k)");
        }
        for (const auto& t : tx_positions)
        {
            require((t - ris_position).norm() > 0.0, "geometry: transmitter coincides with the RIS");
            for (const auto& r : rx_positions)
                require((t - r).norm() > 0.0, "geometry: transmitter coincides with a receiver");
        }
        for (const auto& r : rx_positions)
            require((r - ris_position).norm() > 0.0, "geometry: receiver coincides with the RIS");
    }
};

/// Large-scale and small-scale fading parameters.
///
/// Line-of-sight components use uniform linear arrays along `*_axis` with
/// element spacing `element_spacing` (in wavelengths). End-to-end gains are
/// expressed relative to `reference_path_loss_db`: the reference divides the
/// direct links and the Tx->RIS hop, so the cascade F^H Theta G is scaled
/// exactly once. The default 0 keeps absolute gains.
struct FadingSpec
{
    double direct_pathloss_exponent{3.75};
    double ris_pathloss_exponent{2.0};
    double rician_factor{3.0};
    double element_spacing{0.5};
    Vec3 tx_axis{0.0, 1.0, 0.0};
    Vec3 rx_axis{0.0, 1.0, 0.0};
    Vec3 ris_axis{0.0, 1.0, 0.0};
    double reference_path_loss_db{0.0};

    void validate() const
    {
        require(direct_pathloss_exponent > 0.0 && ris_pathloss_exponent > 0.0,
                "fading: path-loss exponents must be positive");
        require(rician_factor >= 0.0, "fading: Rician factor must be nonnegative");
        require(element_spacing > 0.0, "fading: element spacing must be positive");
        require(tx_axis.norm() > 0.0 && rx_axis.norm() > 0.0 && ris_axis.norm() > 0.0,
                "fading: array axes must be nonzero");
    }
};

/// Channel matrices of one network realization.
///
/// H[l][k] is R_k x T_l (Tx l to Rx k), G[l] is M x T_l (Tx l to RIS) and
/// F[k] is M x R_k (RIS to Rx k, used as F[k]^H).
struct ChannelSet
{
    std::vector<std::vector<CMat>> H;
    std::vector<CMat> G;
    std::vector<CMat> F;

    [[nodiscard]] int users() const { return static_cast<int>(G.size()); }
    [[nodiscard]] int ris_elements() const { return G.empty() ? 0 : static_cast<int>(G.front().rows()); }

    [[nodiscard]] bool all_finite() const
    {
        for (const auto& row : H)
            for (const auto& m : row)
                if (!m.allFinite())
                    return false;
        for (const auto& m : G)
            if (!m.allFinite())
                return false;
        for (const auto& m : F)
            if (!m.allFinite())
                return false;
        return true;
    }
};

/// PL = -30 - 10 beta log10(d), in dB.
inline double path_loss_db(double distance, double beta)
{
    require(distance > 0.0, "path_loss_db: distance must be positive");
    require(beta > 0.0, "path_loss_db: exponent must be positive");
    return -30.0 - 10.0 * beta * std::log10(distance);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Steering vector of an N-element ULA for a unit direction.
inline CVec ula_steering(int N, const Vec3& axis, const Vec3& direction, double spacing)
{
    const double cos_angle = axis.normalized().dot(direction.normalized());
    CVec a(N);
    for (int n = 0; n < N; ++n)
        a(n) = std::polar(1.0, 2.0 * std::numbers::pi * spacing * n * cos_angle);
    return a;
}

namespace detail
{

// substream tags; one per channel matrix
inline std::uint64_t tag_direct(int l, int k) { return 0x10000ULL + 256ULL * l + k; }
inline std::uint64_t tag_tx_ris(int l) { return 0x20000ULL + l; }
inline std::uint64_t tag_ris_rx(int k) { return 0x30000ULL + k; }

inline CMat rician(Rng& rng, const CMat& los, double gamma, double gain)
{
    const CMat scatter = complex_gaussian(rng, static_cast<int>(los.rows()), static_cast<int>(los.cols()));
    const double w_los = std::sqrt(gamma / (1.0 + gamma));
    const double w_nlos = std::sqrt(1.0 / (1.0 + gamma));
    return std::sqrt(gain) * (w_los * los + w_nlos * scatter);
}

}  // namespace detail

/// Deterministic LOS part of G[l] (M x T_l), unit-modulus entries.
inline CMat los_tx_ris(const NetworkGeometry& geom, const FadingSpec& fading, int l)
{
    const Vec3 to_tx = geom.tx_positions[l] - geom.ris_position;
    const CVec a_ris = ula_steering(geom.ris_elements, fading.ris_axis, to_tx, fading.element_spacing);
    const CVec a_tx = ula_steering(geom.tx_antennas[l], fading.tx_axis, -to_tx, fading.element_spacing);
    return a_ris * a_tx.transpose();
}

/// Deterministic LOS part of F[k] (M x R_k), unit-modulus entries.
inline CMat los_ris_rx(const NetworkGeometry& geom, const FadingSpec& fading, int k)
{
    const Vec3 to_rx = geom.rx_positions[k] - geom.ris_position;
    const CVec a_ris = ula_steering(geom.ris_elements, fading.ris_axis, to_rx, fading.element_spacing);
    const CVec a_rx = ula_steering(geom.rx_antennas[k], fading.rx_axis, -to_rx, fading.element_spacing);
    return a_ris * a_rx.transpose();
}

/// Draws one realization: Rayleigh direct links, Rician RIS links.
inline ChannelSet sample_channels(const NetworkGeometry& geom, const FadingSpec& fading, std::uint64_t seed)
{
    geom.validate();
    fading.validate();
    const int K = geom.users();
    const double ref = fading.reference_path_loss_db;

    ChannelSet ch;
    ch.H.resize(K);
    for (int l = 0; l < K; ++l)
    {
        ch.H[l].resize(K);
        for (int k = 0; k < K; ++k)
        {
            const double d = (geom.rx_positions[k] - geom.tx_positions[l]).norm();
            const double gain = db_to_linear(path_loss_db(d, fading.direct_pathloss_exponent) - ref);
            Rng rng = make_rng(seed, detail::tag_direct(l, k));
            ch.H[l][k] = complex_gaussian(rng, geom.rx_antennas[k], geom.tx_antennas[l], gain);
        }
    }
    ch.G.resize(K);
    ch.F.resize(K);
    for (int l = 0; l < K; ++l)
    {
        const double d = (geom.tx_positions[l] - geom.ris_position).norm();
        const double gain = db_to_linear(path_loss_db(d, fading.ris_pathloss_exponent) - ref);
        Rng rng = make_rng(seed, detail::tag_tx_ris(l));
        ch.G[l] = detail::rician(rng, los_tx_ris(geom, fading, l), fading.rician_factor, gain);
    }
    for (int k = 0; k < K; ++k)
    {
        const double d = (geom.rx_positions[k] - geom.ris_position).norm();
        // the reference is applied once per end-to-end path, on the Tx->RIS hop
        const double gain = db_to_linear(path_loss_db(d, fading.ris_pathloss_exponent));
        Rng rng = make_rng(seed, detail::tag_ris_rx(k));
        ch.F[k] = detail::rician(rng, los_ris_rx(geom, fading, k), fading.rician_factor, gain);
    }
    return ch;
}

/// The (3x3, 2)^K layout with transmitters on x = 0 and receivers on x = 50.
/// For K = 2 the middle pair is dropped.
inline NetworkGeometry default_geometry(int K, int M = 100)
{
    require(K == 2 || K == 3, "default_geometry: K must be 2 or 3");
    NetworkGeometry geom;
    const std::vector<double> ys = K == 3 ? std::vector<double>{0.0, 25.0, 50.0} : std::vector<double>{0.0, 50.0};
    for (double y : ys)
    {
        geom.tx_positions.emplace_back(0.0, y, 2.0);
        geom.rx_positions.emplace_back(50.0, y, 2.0);
    }
    geom.ris_position = Vec3(40.0, 25.0, 15.0);
    geom.tx_antennas.assign(K, 3);
    geom.rx_antennas.assign(K, 3);
    geom.streams.assign(K, 2);
    geom.ris_elements = M;
    return geom;
}

/// Reference path loss that gives a 50 m direct link unit gain.
inline double default_reference_path_loss_db() { return path_loss_db(50.0, 3.75); }

}  // namespace risil
