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
#include "risil/random.hpp"
#include "risil/types.hpp"

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace risil
{

// ---------------------------------------------------------------------------
// Active RIS
// ---------------------------------------------------------------------------

struct ActiveSolution
{
    RisVector ris;
    CVec alpha;  // coordinates of r_unc in the signal basis
};

/// Tolerance of the s-in-colspan(Sigma) consistency check (relative to ||s||).
inline constexpr double kColspanTolerance = 1e-9;

/// r_unc = -Sigma^# s = U_signal alpha with alpha = -Lambda^{-1} U_signal^H s.
///
/// Zeroes the leakage when M > g. Throws if s has a component outside the
/// signal subspace, which means qf and dec do not belong together.
inline ActiveSolution active_solve(const QuadraticForm& qf, const SubspaceDecomposition& dec)
{
    require(dec.ris_elements() == qf.ris_elements(), "active_solve: decomposition does not match quadratic form");
    const CVec proj = dec.U_signal.adjoint() * qf.s;
    const double s_norm = qf.s.norm();
    const double outside = (qf.s - dec.U_signal * proj).norm();
    if (outside > kColspanTolerance * s_norm)
        throw DomainError("active_solve: s is not in colspan(Sigma) (residual " + std::to_string(outside / s_norm) +
                          ")");
    ActiveSolution sol;
    sol.alpha = -(dec.Lambda.cwiseInverse().asDiagonal() * proj);
    sol.ris = RisVector::active(dec.U_signal * sol.alpha);
    return sol;
}

/// Active minimizer for any M: uses decompose() when M > g and the full
/// positive spectrum otherwise (IL then generally stays positive).
inline ActiveSolution active_minimizer(const QuadraticForm& qf)
{
    if (qf.ris_elements() > qf.g)
        return active_solve(qf, decompose(qf));
    return active_solve(qf, decompose_spectrum(qf));
}

enum class NormConstraint
{
    per_element,  // |r_m| <= 1
    total_norm    // ||r||_2^2 <= 1
};

struct RegularizedSolution
{
    RisVector ris;
    double mu{0.0};
};

namespace detail
{

inline CVec regularized_coefficients(const CVec& proj, const SubspaceDecomposition& dec, double mu)
{
    const RVec denom = (dec.Lambda.array() + mu).matrix();
    return -(dec.U_signal * (denom.cwiseInverse().asDiagonal() * proj));
}

inline double constraint_value(const CVec& r, NormConstraint c)
{
    return c == NormConstraint::total_norm ? r.squaredNorm() : r.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// r(mu) = -U_signal (Lambda + mu I)^{-1} U_signal^H s with the smallest mu
/// (found by bisection) that satisfies the constraint.
inline RegularizedSolution active_solve_regularized(const QuadraticForm& qf, const SubspaceDecomposition& dec,
                                                    NormConstraint constraint)
{
    const ActiveSolution unc = active_solve(qf, dec);
    if (unc.ris.r.size() == 0 || detail::constraint_value(unc.ris.r, constraint) <= 1.0)
        return {unc.ris, 0.0};

    const CVec proj = dec.U_signal.adjoint() * qf.s;
    auto value = [&](double mu) {
        return detail::constraint_value(detail::regularized_coefficients(proj, dec, mu), constraint);
    };

    double hi = std::max(dec.Lambda.size() > 0 ? dec.Lambda(dec.Lambda.size() - 1) : 1.0, 1e-300);
    while (value(hi) > 1.0)
        hi *= 2.0;
    double lo = 0.0;
    const double width = 1e-10 * hi;
    while (hi - lo > width)
    {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return {RisVector::active(detail::regularized_coefficients(proj, dec, hi)), hi};
}

// ---------------------------------------------------------------------------
// Unit-modulus RIS: block coordinate descent
// ---------------------------------------------------------------------------

/// One coordinate update on the bare quadratic form.
///
/// Sets theta_m = angle(s_m + Sigma_mbar^H r_mbar) - pi. If that argument is
/// exactly zero every phase is optimal and r_m is kept.
inline RisVector bcd_step(const QuadraticForm& qf, const RisVector& r, int m)
{
    require(r.mode == RisMode::unit_modulus, "bcd_step: RIS must be unit-modulus");
    require(m >= 0 && m < r.size() && r.size() == qf.ris_elements(), "bcd_step: element index out of range");
    cdouble c = qf.s(m);
    for (int n = 0; n < r.size(); ++n)
        if (n != m)
            c += std::conj(qf.Sigma(n, m)) * r.r(n);
    RisVector out = r;
    if (std::abs(c) > 0.0)
        out.r(m) = std::polar(1.0, wrap_phase(std::arg(c) - std::numbers::pi));
    return out;
}

struct BcdOptions
{
    int max_sweeps{5000};
    double tol{1e-12};          // relative IL decrease per sweep
    double il_floor{1e-14};     // stop once IL < il_floor * max(1, tr T)
    double il_target{0.0};      // optional absolute stop, 0 disables
};

struct BcdReport
{
    std::vector<double> il_trajectory;  // IL before the first sweep, then after each sweep
    int sweeps{0};
    bool converged{false};
    double final_il{0.0};
};

/// Coordinate-descent engine on IL(r) = ||B r + h||^2 + offset.
///
/// Keeps the residual e = B r + h, so each element update is O(rows(B)).
/// The residual is rebuilt from scratch after every sweep.
inline std::pair<RisVector, BcdReport> bcd_solve(const LeakageFactor& f, RisVector r0, const BcdOptions& opts = {})
{
    require(r0.mode == RisMode::unit_modulus, "bcd_solve: initial RIS must be unit-modulus");
    require(r0.size() == f.ris_elements(), "bcd_solve: RIS length mismatch");
    require(opts.max_sweeps >= 1, "bcd_solve: max_sweeps must be >= 1");

    const int M = f.ris_elements();
    const RVec diag = f.B.colwise().squaredNorm().transpose();
    const double floor = opts.il_floor * std::max(1.0, f.trace_T());

    RisVector r = std::move(r0);
    CVec e = f.B * r.r + f.h;
    BcdReport report;
    double il = e.squaredNorm() + f.offset;
    report.il_trajectory.push_back(il);

    auto done = [&](double value) { return value < floor || (opts.il_target > 0.0 && value < opts.il_target); };
    if (done(il))
    {
        report.converged = true;
        report.final_il = il;
        return {std::move(r), std::move(report)};
    }

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep)
    {
        for (int m = 0; m < M; ++m)
        {
            const cdouble c = f.B.col(m).dot(e) - diag(m) * r.r(m);
            if (std::abs(c) == 0.0)
                continue;
            const cdouble updated = std::polar(1.0, wrap_phase(std::arg(c) - std::numbers::pi));
            const cdouble delta = updated - r.r(m);
            r.r(m) = updated;
            e += f.B.col(m) * delta;
        }
        e = f.B * r.r + f.h;
        const double next = e.squaredNorm() + f.offset;
        report.il_trajectory.push_back(next);
        ++report.sweeps;
        const double decrease = il - next;
        il = next;
        if (done(il) || decrease < opts.tol * il)
        {
            report.converged = true;
            break;
        }
    }
    report.final_il = il;
    return {std::move(r), std::move(report)};
}

/// BCD on a bare quadratic form; the factor is derived from its decomposition.
inline std::pair<RisVector, BcdReport> bcd_solve(const QuadraticForm& qf, RisVector r0, const BcdOptions& opts = {})
{
    const SubspaceDecomposition dec = decompose_spectrum(qf);
    return bcd_solve(factor_from_decomposition(qf, dec), std::move(r0), opts);
}

/// Default start: phases of the unconstrained active solution.
inline RisVector default_initialization(const QuadraticForm& qf)
{
    return phase_projection(active_minimizer(qf).ris.r);
}

inline RisVector random_initialization(int M, std::uint64_t seed)
{
    Rng rng = make_rng(seed, 0x60000ULL);
    return RisVector::from_phases(uniform_phases(rng, M));
}

/// Angle between r_m and -(s_m + Sigma_mbar^H r_mbar), maximized over m.
/// Elements whose update argument has modulus below 1e-12 are skipped.
inline double stationarity_gap(const QuadraticForm& qf, const RisVector& r)
{
    double worst = 0.0;
    for (int m = 0; m < r.size(); ++m)
    {
        cdouble c = qf.s(m);
        for (int n = 0; n < r.size(); ++n)
            if (n != m)
                c += std::conj(qf.Sigma(n, m)) * r.r(n);
        if (std::abs(c) < 1e-12)
            continue;
        worst = std::max(worst, std::abs(wrap_phase(std::arg(r.r(m)) - std::arg(-c))));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// M = 2, g = 1 closed form
// ---------------------------------------------------------------------------

/// Both unit-modulus zero-IL RIS vectors when M = 2 and g = 1, or none.
///
/// r = u_s alpha + u_n sqrt(2 - |alpha|^2) e^{j theta_beta}, with theta_beta
/// chosen so that |r_1| = 1; |r_2| = 1 then follows from ||r||^2 = 2.
inline std::vector<RisVector> m2_solutions(const QuadraticForm& qf, const SubspaceDecomposition& dec)
{
    require(qf.ris_elements() == 2, "m2_solutions: need M = 2");
    require(qf.g == 1 && dec.U_signal.cols() == 1, "m2_solutions: need g = 1");
    const CVec us = dec.U_signal.col(0);
    const CVec un = dec.U_noise.col(0);
    const cdouble alpha = active_solve(qf, dec).alpha(0);

    const double g1 = std::abs(us(0));
    const double g2 = std::abs(us(1));
    const double mag = std::abs(alpha);
    constexpr double slack = 1e-9;
    if (mag < std::abs(g1 - g2) - slack || mag > g1 + g2 + slack)
        return {};

    const double beta_mag = std::sqrt(std::max(0.0, 2.0 - mag * mag));
    const cdouble a = alpha * us(0);
    const cdouble b = beta_mag * un(0);
    double cos_arg = 1.0;
    if (std::abs(a) * std::abs(b) > 0.0)
        cos_arg = (1.0 - std::norm(a) - std::norm(b)) / (2.0 * std::abs(a) * std::abs(b));
    const double spread = std::acos(std::clamp(cos_arg, -1.0, 1.0));

    std::vector<RisVector> out;
    for (double sign : {1.0, -1.0})
    {
        const double theta_beta = sign * spread + std::arg(a) - std::arg(b);
        const CVec r = us * alpha + un * (beta_mag * std::polar(1.0, theta_beta));
        // renormalize away rounding so the unit-modulus invariant holds exactly
        out.push_back(phase_projection(r));
    }
    return out;
}

}  // namespace risil
