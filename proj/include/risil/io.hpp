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
#include "risil/scenario.hpp"
#include "risil/types.hpp"

#include "json.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace risil
{

using json = nlohmann::json;

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scenario files (JSON, see config/scenario.schema.json)
// ---------------------------------------------------------------------------

struct Scenario
{
    NetworkGeometry geometry;
    FadingSpec fading;
    std::uint64_t seed{1};
};

namespace detail
{

inline Vec3 vec3_from_json(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 3)
        throw DomainError(what + ": expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace detail

inline Scenario scenario_from_json(const json& j)
{
    Scenario sc;
    try
    {
        const json& g = j.at("geometry");
        for (const auto& p : g.at("tx_positions"))
            sc.geometry.tx_positions.push_back(detail::vec3_from_json(p, "tx_positions"));
        for (const auto& p : g.at("rx_positions"))
            sc.geometry.rx_positions.push_back(detail::vec3_from_json(p, "rx_positions"));
        sc.geometry.ris_position = detail::vec3_from_json(g.at("ris_position"), "ris_position");
        sc.geometry.tx_antennas = g.at("tx_antennas").get<std::vector<int>>();
        sc.geometry.rx_antennas = g.at("rx_antennas").get<std::vector<int>>();
        sc.geometry.streams = g.at("streams").get<std::vector<int>>();
        sc.geometry.ris_elements = g.at("ris_elements").get<int>();

        if (j.contains("fading"))
        {
            const json& f = j.at("fading");
            FadingSpec& fs = sc.fading;
            fs.direct_pathloss_exponent = f.value("direct_pathloss_exponent", fs.direct_pathloss_exponent);
            fs.ris_pathloss_exponent = f.value("ris_pathloss_exponent", fs.ris_pathloss_exponent);
            fs.rician_factor = f.value("rician_factor", fs.rician_factor);
            fs.element_spacing = f.value("element_spacing_wavelengths", fs.element_spacing);
            fs.reference_path_loss_db = f.value("reference_path_loss_db", fs.reference_path_loss_db);
            if (f.contains("tx_axis"))
                fs.tx_axis = detail::vec3_from_json(f["tx_axis"], "tx_axis");
            if (f.contains("rx_axis"))
                fs.rx_axis = detail::vec3_from_json(f["rx_axis"], "rx_axis");
            if (f.contains("ris_axis"))
                fs.ris_axis = detail::vec3_from_json(f["ris_axis"], "ris_axis");
        }
        sc.seed = j.value("seed", sc.seed);
    }
    catch (const json::exception& e)
    {
        throw DomainError(std::string("scenario: ") + e.what());
    }
    sc.geometry.validate();
    sc.fading.validate();
    return sc;
}

inline json scenario_to_json(const Scenario& sc)
{
    json g;
    g["tx_positions"] = json::array();
    for (const auto& p : sc.geometry.tx_positions)
        g["tx_positions"].push_back(detail::vec3_to_json(p));
    g["rx_positions"] = json::array();
    for (const auto& p : sc.geometry.rx_positions)
        g["rx_positions"].push_back(detail::vec3_to_json(p));
    g["ris_position"] = detail::vec3_to_json(sc.geometry.ris_position);
    g["tx_antennas"] = sc.geometry.tx_antennas;
    g["rx_antennas"] = sc.geometry.rx_antennas;
    g["streams"] = sc.geometry.streams;
    g["ris_elements"] = sc.geometry.ris_elements;

    const FadingSpec& fs = sc.fading;
    json f;
    f["direct_pathloss_exponent"] = fs.direct_pathloss_exponent;
    f["ris_pathloss_exponent"] = fs.ris_pathloss_exponent;
    f["rician_factor"] = fs.rician_factor;
    f["element_spacing_wavelengths"] = fs.element_spacing;
    f["reference_path_loss_db"] = fs.reference_path_loss_db;
    f["tx_axis"] = detail::vec3_to_json(fs.tx_axis);
    f["rx_axis"] = detail::vec3_to_json(fs.rx_axis);
    f["ris_axis"] = detail::vec3_to_json(fs.ris_axis);

    return json{{"geometry", g}, {"fading", f}, {"seed", sc.seed}};
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try
    {
        return json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw IoError(path + ": " + e.what());
    }
}

inline Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------
// Quadratic-form dumps
//
//   bytes [0, 8)    magic "RISILQF1"
//   bytes [8, 16)   header length N, uint64 little-endian
//   bytes [16, 16+N) UTF-8 JSON header
//   remaining       payload: complex doubles, (re, im) float64 little-endian,
//                   each array column-major at header.arrays.<name>.offset
//                   (bytes from the payload start)
//
// Header: {"format": "risil-quadratic-form", "version": 1, "M": .., "g": ..,
//          "trace_T": .., "dtype": "complex128-le", "order": "column-major",
//          "arrays": {"T": {"rows", "cols", "offset"}, "s": {...}, "Sigma": {...}}}
// ---------------------------------------------------------------------------

inline constexpr char kQfMagic[8] = {'R', 'I', 'S', 'I', 'L', 'Q', 'F', '1'};

namespace detail
{

inline void put_u64_le(std::string& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_u64_le(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

inline void put_matrix(std::string& out, const CMat& m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            put_u64_le(out, std::bit_cast<std::uint64_t>(m(r, c).real()));
            put_u64_le(out, std::bit_cast<std::uint64_t>(m(r, c).imag()));
        }
}

inline CMat get_matrix(const std::string& payload, const json& desc)
{
    const auto rows = desc.at("rows").get<std::int64_t>();
    const auto cols = desc.at("cols").get<std::int64_t>();
    const auto offset = desc.at("offset").get<std::uint64_t>();
    if (rows < 0 || cols < 0 || offset + static_cast<std::uint64_t>(rows * cols) * 16 > payload.size())
        throw IoError("quadratic-form dump: array extends past the payload");
    CMat m(rows, cols);
    const auto* p = reinterpret_cast<const unsigned char*>(payload.data()) + offset;
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
        {
            const double re = std::bit_cast<double>(get_u64_le(p));
            const double im = std::bit_cast<double>(get_u64_le(p + 8));
            m(r, c) = {re, im};
            p += 16;
        }
    return m;
}

}  // namespace detail

inline std::string serialize_quadratic_form(const QuadraticForm& qf)
{
    std::string payload;
    json arrays;
    auto add = [&](const char* name, const CMat& m) {
        arrays[name] = {{"rows", m.rows()}, {"cols", m.cols()}, {"offset", payload.size()}};
        detail::put_matrix(payload, m);
    };
    add("T", qf.T);
    add("s", CMat(qf.s));
    add("Sigma", qf.Sigma);

    const json header = {{"format", "risil-quadratic-form"},
                         {"version", 1},
                         {"M", qf.ris_elements()},
                         {"g", qf.g},
                         {"trace_T", qf.trace_T()},
                         {"dtype", "complex128-le"},
                         {"order", "column-major"},
                         {"arrays", arrays}};
    const std::string text = header.dump();
    std::string out(kQfMagic, sizeof(kQfMagic));
    detail::put_u64_le(out, text.size());
    out += text;
    out += payload;
    return out;
}

inline QuadraticForm deserialize_quadratic_form(const std::string& bytes)
{
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kQfMagic, sizeof(kQfMagic)) != 0)
        throw IoError("quadratic-form dump: bad magic");
    const auto len = detail::get_u64_le(reinterpret_cast<const unsigned char*>(bytes.data()) + 8);
    if (16 + len > bytes.size())
        throw IoError("quadratic-form dump: truncated header");
    json header;
    try
    {
        header = json::parse(bytes.substr(16, len));
    }
    catch (const json::parse_error& e)
    {
        throw IoError(std::string("quadratic-form dump: ") + e.what());
    }
    if (header.value("format", "") != "risil-quadratic-form" || header.value("version", 0) != 1)
        throw IoError("quadratic-form dump: unsupported format or version");
    const std::string payload = bytes.substr(16 + len);

    QuadraticForm qf;
    try
    {
        const json& arrays = header.at("arrays");
        qf.T = detail::get_matrix(payload, arrays.at("T"));
        const CMat s = detail::get_matrix(payload, arrays.at("s"));
        if (s.cols() != 1)
            throw IoError("quadratic-form dump: s must be a column");
        qf.s = s.col(0);
        qf.Sigma = detail::get_matrix(payload, arrays.at("Sigma"));
        qf.g = header.at("g").get<int>();
    }
    catch (const json::exception& e)
    {
        throw IoError(std::string("quadratic-form dump: ") + e.what());
    }
    if (qf.Sigma.rows() != qf.s.size() || qf.Sigma.cols() != qf.s.size())
        throw IoError("quadratic-form dump: Sigma and s sizes disagree");
    return qf;
}

inline void write_file(const std::string& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void save_quadratic_form(const std::string& path, const QuadraticForm& qf)
{
    write_file(path, serialize_quadratic_form(qf));
}

inline QuadraticForm load_quadratic_form(const std::string& path)
{
    return deserialize_quadratic_form(read_file(path));
}

}  // namespace risil
