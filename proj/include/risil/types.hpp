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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risil
{

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

/// Raised when an input violates an operation's precondition.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw DomainError(message);
}

/// Wraps an angle into [-pi, pi).
inline double wrap_phase(double theta)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(theta + std::numbers::pi, two_pi);
    if (w < 0.0)
        w += two_pi;
    return w - std::numbers::pi;
}

enum class RisMode
{
    active,
    unit_modulus
};

inline const char* to_string(RisMode mode)
{
    return mode == RisMode::active ? "active" : "unit_modulus";
}

/// Reflection coefficients of the RIS; Theta = diag(r).
struct RisVector
{
    CVec r;
    RisMode mode{RisMode::active};

    [[nodiscard]] int size() const { return static_cast<int>(r.size()); }

    /// Largest deviation of |r_m| from one.
    [[nodiscard]] double modulus_error() const
    {
        double err = 0.0;
        for (Eigen::Index m = 0; m < r.size(); ++m)
            err = std::max(err, std::abs(std::abs(r(m)) - 1.0));
        return err;
    }

    static RisVector active(CVec coefficients) { return {std::move(coefficients), RisMode::active}; }

    static RisVector from_phases(const RVec& theta)
    {
        CVec r(theta.size());
        for (Eigen::Index m = 0; m < theta.size(); ++m)
            r(m) = std::polar(1.0, theta(m));
        return {std::move(r), RisMode::unit_modulus};
    }

    static RisVector zeros(int M) { return {CVec::Zero(M), RisMode::active}; }
};

/// Projects each coefficient onto the unit circle; zero entries map to phase 0.
inline RisVector phase_projection(const CVec& r)
{
    RVec theta(r.size());
    for (Eigen::Index m = 0; m < r.size(); ++m)
        theta(m) = std::abs(r(m)) > 0.0 ? std::arg(r(m)) : 0.0;
    return RisVector::from_phases(theta);
}

}  // namespace risil
