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

#include "risil/feasibility.hpp"
#include "risil/io.hpp"
#include "risil/leakage.hpp"
#include "risil/rates.hpp"
#include "risil/ris_optimizer.hpp"
#include "risil/scenario.hpp"
#include "risil/txrx_optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace risil
{

enum class ExperimentKind
{
    sumrate,
    feasibility
};

/// One (M, mode) curve of the sum-rate experiment.
struct Series
{
    int M{0};
    RisMode mode{RisMode::unit_modulus};
};

struct ExperimentConfig
{
    ExperimentKind kind{ExperimentKind::feasibility};
    std::vector<Scenario> scenarios;
    std::vector<int> M_list{25, 50, 100, 150, 200, 300};
    std::vector<RisMode> ris_modes{RisMode::unit_modulus};
    std::vector<Series> series;  // overrides M_list x ris_modes when nonempty
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30, 35, 40};
    int trials{100};
    std::vector<bool> optimize_txrx{false};
    int restarts{1};
    std::uint64_t seed{1};
    double feasibility_threshold{1e-8};
    BcdOptions bcd{};
    AlternationSchedule joint{200, RisStep::unit_modulus, BcdOptions{200, 1e-12, 1e-14, 0.0}, 1e-12, 1e-10};
    std::string output;
    std::string trial_log;

    [[nodiscard]] std::vector<Series> resolved_series() const
    {
        if (!series.empty())
            return series;
        std::vector<Series> out;
        for (RisMode mode : ris_modes)
            for (int M : M_list)
                out.push_back({M, mode});
        return out;
    }

    void validate() const
    {
        require(trials >= 1, "experiment: trials must be >= 1");
        require(!scenarios.empty(), "experiment: need at least one scenario");
        require(!resolved_series().empty(), "experiment: M grid must be nonempty");
        require(!optimize_txrx.empty(), "experiment: optimize_txrx must be nonempty");
        require(restarts >= 0, "experiment: restarts must be >= 0");
        if (kind == ExperimentKind::sumrate)
            require(!snr_grid_db.empty(), "experiment: SNR grid must be nonempty");
        for (const auto& s : resolved_series())
            require(s.M >= 1, "experiment: M must be positive");
    }
};

inline RisMode parse_ris_mode(const std::string& s)
{
    if (s == "active")
        return RisMode::active;
    if (s == "unit_modulus" || s == "unit")
        return RisMode::unit_modulus;
    throw DomainError("unknown ris_mode '" + s + "'");
}

namespace detail
{

template <typename T, typename F>
std::vector<T> scalar_or_list(const json& j, F convert)
{
    std::vector<T> out;
    if (j.is_array())
        for (const auto& e : j)
            out.push_back(convert(e));
    else
        out.push_back(convert(j));
    return out;
}

}  // namespace detail

/// Parses an experiment config. Relative scenario paths resolve against `base_dir`.
inline ExperimentConfig experiment_from_json(const json& j, const std::filesystem::path& base_dir = {})
{
    ExperimentConfig cfg;
    try
    {
        const std::string kind = j.at("experiment").get<std::string>();
        if (kind == "sumrate")
            cfg.kind = ExperimentKind::sumrate;
        else if (kind == "feasibility")
            cfg.kind = ExperimentKind::feasibility;
        else
            throw DomainError("experiment: unknown kind '" + kind + "'");

        for (const auto& entry : detail::scalar_or_list<json>(j.at("scenario"), [](const json& e) { return e; }))
        {
            if (entry.is_string())
            {
                std::filesystem::path p = entry.get<std::string>();
                if (p.is_relative())
                    p = base_dir / p;
                cfg.scenarios.push_back(load_scenario(p.string()));
            }
            else
                cfg.scenarios.push_back(scenario_from_json(entry));
        }
        if (j.contains("M_list"))
            cfg.M_list = j["M_list"].get<std::vector<int>>();
        if (j.contains("ris_mode"))
            cfg.ris_modes = detail::scalar_or_list<RisMode>(
                j["ris_mode"], [](const json& e) { return parse_ris_mode(e.get<std::string>()); });
        if (j.contains("series"))
            for (const auto& s : j["series"])
                cfg.series.push_back({s.at("M").get<int>(), parse_ris_mode(s.at("ris_mode").get<std::string>())});
        if (j.contains("snr_grid_db"))
            cfg.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
        cfg.trials = j.value("trials", cfg.trials);
        if (j.contains("optimize_txrx"))
            cfg.optimize_txrx = detail::scalar_or_list<bool>(j["optimize_txrx"], [](const json& e) { return e.get<bool>(); });
        cfg.restarts = j.value("restarts", cfg.restarts);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.feasibility_threshold = j.value("feasibility_threshold", cfg.feasibility_threshold);
        if (j.contains("bcd"))
        {
            const json& b = j["bcd"];
            cfg.bcd.max_sweeps = b.value("max_sweeps", cfg.bcd.max_sweeps);
            cfg.bcd.tol = b.value("tol", cfg.bcd.tol);
            cfg.bcd.il_floor = b.value("il_floor", cfg.bcd.il_floor);
        }
        if (j.contains("joint"))
        {
            const json& b = j["joint"];
            cfg.joint.max_cycles = b.value("max_cycles", cfg.joint.max_cycles);
            cfg.joint.bcd.max_sweeps = b.value("bcd_max_sweeps", cfg.joint.bcd.max_sweeps);
            cfg.joint.tol = b.value("tol", cfg.joint.tol);
            cfg.joint.il_target = b.value("il_target", cfg.joint.il_target);
        }
        cfg.output = j.value("output", std::string{});
        cfg.trial_log = j.value("trial_log", std::string{});
    }
    catch (const json::exception& e)
    {
        throw DomainError(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_experiment(const std::string& path)
{
    return experiment_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

// ---------------------------------------------------------------------------
// Parallel trial execution
// ---------------------------------------------------------------------------

/// Worker count from RISIL_WORKERS, else the hardware concurrency.
inline int worker_count()
{
    if (const char* env = std::getenv("RISIL_WORKERS"))
    {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on `workers` threads; results land at index i.
template <typename T>
std::vector<T> run_indexed(int n, int workers, const std::function<T(int)>& fn)
{
    std::vector<T> results(n);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&]() {
        for (int i = next++; i < n && !failed; i = next++)
        {
            try
            {
                results[i] = fn(i);
            }
            catch (...)
            {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

// ---------------------------------------------------------------------------
// Per-trial pipeline
// ---------------------------------------------------------------------------

inline std::uint64_t trial_seed(std::uint64_t experiment_seed, int trial)
{
    return substream_seed(experiment_seed, 0x70000ULL + static_cast<std::uint64_t>(trial));
}

/// Unit-modulus BCD from the phase-projected active solution plus `restarts`
/// uniform-random starts; keeps the lowest IL. Restarts are skipped once a
/// run has already reached `good_enough`.
inline std::pair<RisVector, double> optimize_unit_modulus(const LeakageFactor& f, const QuadraticForm& qf,
                                                          int restarts, std::uint64_t seed, const BcdOptions& opts,
                                                          double good_enough)
{
    auto [best, rep] = bcd_solve(f, default_initialization(qf), opts);
    double best_il = rep.final_il;
    for (int q = 0; q < restarts && best_il >= good_enough; ++q)
    {
        auto [r, rq] = bcd_solve(f, random_initialization(f.ris_elements(), substream_seed(seed, 0x80000ULL + q)), opts);
        if (rq.final_il < best_il)
        {
            best = std::move(r);
            best_il = rq.final_il;
        }
    }
    return {std::move(best), best_il};
}

struct AnnulusCheck
{
    bool evaluated{false};  // false when M <= g
    Verdict verdict{Verdict::necessary_conditions_hold};
    double min_margin{0.0};
    bool rank_matches{true};
};

inline AnnulusCheck annulus_check(const QuadraticForm& qf)
{
    AnnulusCheck out;
    if (qf.ris_elements() <= qf.g)
        return out;
    const SubspaceDecomposition dec = decompose(qf);
    const ActiveSolution act = active_solve(qf, dec);
    const FeasibilityReport rep = check_annulus_conditions(dec, act.alpha);
    out.evaluated = true;
    out.verdict = rep.verdict;
    out.min_margin = rep.min_margin();
    out.rank_matches = dec.rank_matches();
    return out;
}

struct TrialRecord
{
    int K{0};
    int M{0};
    bool optimize_txrx{false};
    std::string mode;
    int trial{0};
    double final_il{0.0};
    bool feasible{false};
    AnnulusCheck annulus;
};

// ---------------------------------------------------------------------------
// Sum-rate experiment
// ---------------------------------------------------------------------------

struct SumRateRow
{
    double snr_db;
    int M;
    RisMode mode;
    double mean_sum_rate;
    double mean_final_il;
    int trials;
};

struct SumRateResult
{
    std::vector<SumRateRow> rows;
    std::vector<TrialRecord> trials;
};

inline SumRateResult run_sumrate(const ExperimentConfig& cfg, int workers = worker_count())
{
    cfg.validate();
    const Scenario& sc = cfg.scenarios.front();
    const bool joint = cfg.optimize_txrx.front();
    SumRateResult result;

    struct TrialOut
    {
        std::vector<double> rates;
        TrialRecord record;
    };

    for (const Series& series : cfg.resolved_series())
    {
        NetworkGeometry geom = sc.geometry;
        geom.ris_elements = series.M;
        const std::function<TrialOut(int)> run_trial = [&](int t) {
            const std::uint64_t seed = trial_seed(cfg.seed, t);
            const ChannelSet ch = sample_channels(geom, sc.fading, seed);
            TxRxConfig txrx = random_txrx(geom, substream_seed(seed, 1));
            RisVector ris;
            double il = 0.0;
            if (series.mode == RisMode::active)
            {
                const QuadraticForm qf = assemble_quadratic_form(ch, txrx);
                ris = active_minimizer(qf).ris;
                if (joint)
                {
                    AlternationSchedule sch = cfg.joint;
                    sch.ris_step = RisStep::active;
                    auto alt = alternate_full(ch, txrx, ris, sch);
                    txrx = alt.txrx;
                    ris = alt.ris;
                }
                il = il_direct(ch, txrx, ris.r);
            }
            else
            {
                const QuadraticForm qf = assemble_quadratic_form(ch, txrx);
                auto [r, best] = optimize_unit_modulus(leakage_factor(ch, txrx), qf, cfg.restarts,
                                                       substream_seed(seed, 2), cfg.bcd, cfg.feasibility_threshold);
                ris = std::move(r);
                il = best;
                if (joint && il >= cfg.feasibility_threshold)
                {
                    auto alt = alternate_full(ch, txrx, ris, cfg.joint);
                    txrx = alt.txrx;
                    ris = alt.ris;
                    il = alt.trajectory.back();
                }
            }
            TrialOut out;
            for (double snr : cfg.snr_grid_db)
                out.rates.push_back(sum_rate(ch, txrx, ris.r, LinkBudget::from_snr_db(snr)));
            out.record = {geom.users(), series.M, joint, to_string(series.mode), t, il,
                          il < cfg.feasibility_threshold, AnnulusCheck{}};
            if (series.mode == RisMode::unit_modulus && out.record.feasible)
                out.record.annulus = annulus_check(assemble_quadratic_form(ch, txrx));
            return out;
        };
        const auto outs = run_indexed<TrialOut>(cfg.trials, workers, run_trial);

        // reduction in trial order
        double il_sum = 0.0;
        for (const auto& o : outs)
        {
            il_sum += o.record.final_il;
            result.trials.push_back(o.record);
        }
        for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
        {
            double rate_sum = 0.0;
            for (const auto& o : outs)
                rate_sum += o.rates[i];
            result.rows.push_back({cfg.snr_grid_db[i], series.M, series.mode, rate_sum / cfg.trials,
                                   il_sum / cfg.trials, cfg.trials});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Feasibility experiment
// ---------------------------------------------------------------------------

struct FeasibilityRow
{
    int M;
    int K;
    bool optimize_txrx;
    double p_feasible;
    int trials;
};

struct FeasibilityResult
{
    std::vector<FeasibilityRow> rows;
    std::vector<TrialRecord> trials;
};

/// Zero-IL probability per (K, M, optimize_txrx).
///
/// The same trial seed is used across M and across the optimize_txrx flag;
/// the joint run starts from the RIS-only solution of the same trial.
inline FeasibilityResult run_feasibility(const ExperimentConfig& cfg, int workers = worker_count())
{
    cfg.validate();
    FeasibilityResult result;
    const bool want_plain = std::find(cfg.optimize_txrx.begin(), cfg.optimize_txrx.end(), false) != cfg.optimize_txrx.end();
    const bool want_joint = std::find(cfg.optimize_txrx.begin(), cfg.optimize_txrx.end(), true) != cfg.optimize_txrx.end();

    struct TrialOut
    {
        TrialRecord plain;
        TrialRecord joint;
    };

    for (const Scenario& sc : cfg.scenarios)
    {
        for (const Series& series : cfg.resolved_series())
        {
            NetworkGeometry geom = sc.geometry;
            geom.ris_elements = series.M;
            const int K = geom.users();
            const std::function<TrialOut(int)> run_trial = [&](int t) {
                const std::uint64_t seed = trial_seed(cfg.seed, t);
                const ChannelSet ch = sample_channels(geom, sc.fading, seed);
                const TxRxConfig txrx = random_txrx(geom, substream_seed(seed, 1));
                const QuadraticForm qf = assemble_quadratic_form(ch, txrx);
                const std::string mode = to_string(series.mode);

                TrialOut out;
                RisVector ris;
                double il = 0.0;
                if (series.mode == RisMode::active)
                {
                    ris = active_minimizer(qf).ris;
                    il = il_direct(ch, txrx, ris.r);
                }
                else
                {
                    auto [r, best] = optimize_unit_modulus(leakage_factor(ch, txrx), qf, cfg.restarts,
                                                           substream_seed(seed, 2), cfg.bcd, cfg.feasibility_threshold);
                    ris = std::move(r);
                    il = best;
                }
                out.plain = {K, series.M, false, mode, t, il, il < cfg.feasibility_threshold, AnnulusCheck{}};
                if (series.mode == RisMode::unit_modulus && out.plain.feasible)
                    out.plain.annulus = annulus_check(qf);

                if (want_joint)
                {
                    TxRxConfig jt = txrx;
                    RisVector jr = ris;
                    double jil = il;
                    if (jil >= cfg.feasibility_threshold)
                    {
                        AlternationSchedule sch = cfg.joint;
                        sch.ris_step = series.mode == RisMode::active ? RisStep::active : RisStep::unit_modulus;
                        auto alt = alternate_full(ch, txrx, ris, sch);
                        jt = alt.txrx;
                        jr = alt.ris;
                        jil = alt.trajectory.back();
                    }
                    out.joint = {K, series.M, true, mode, t, jil, jil < cfg.feasibility_threshold, AnnulusCheck{}};
                    if (series.mode == RisMode::unit_modulus && out.joint.feasible)
                        out.joint.annulus = annulus_check(assemble_quadratic_form(ch, jt));
                }
                return out;
            };
            const auto outs = run_indexed<TrialOut>(cfg.trials, workers, run_trial);

            for (bool joint : {false, true})
            {
                if ((joint && !want_joint) || (!joint && !want_plain))
                    continue;
                int feasible = 0;
                for (const auto& o : outs)
                {
                    const TrialRecord& rec = joint ? o.joint : o.plain;
                    feasible += rec.feasible ? 1 : 0;
                    result.trials.push_back(rec);
                }
                result.rows.push_back({series.M, K, joint, static_cast<double>(feasible) / cfg.trials, cfg.trials});
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

inline std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string sumrate_csv(const SumRateResult& res)
{
    std::string out = "snr_db,M,mode,mean_sum_rate,mean_final_il,trials\n";
    for (const auto& r : res.rows)
        out += format_number(r.snr_db) + "," + std::to_string(r.M) + "," + to_string(r.mode) + "," +
               format_number(r.mean_sum_rate) + "," + format_number(r.mean_final_il) + "," +
               std::to_string(r.trials) + "\n";
    return out;
}

inline std::string feasibility_csv(const FeasibilityResult& res)
{
    std::string out = "M,K,optimize_txrx,p_feasible,trials\n";
    for (const auto& r : res.rows)
        out += std::to_string(r.M) + "," + std::to_string(r.K) + "," + (r.optimize_txrx ? "true" : "false") + "," +
               format_number(r.p_feasible) + "," + std::to_string(r.trials) + "\n";
    return out;
}

/// Per-trial log; annulus_verdict is "not_evaluated" when the trial was not
/// feasible or M <= g.
inline std::string trial_log_csv(const std::vector<TrialRecord>& trials)
{
    std::string out = "K,M,optimize_txrx,mode,trial,final_il,feasible,annulus_verdict,annulus_min_margin\n";
    for (const auto& t : trials)
        out += std::to_string(t.K) + "," + std::to_string(t.M) + "," + (t.optimize_txrx ? "true" : "false") + "," +
               t.mode + "," + std::to_string(t.trial) + "," + format_number(t.final_il) + "," +
               (t.feasible ? "true" : "false") + "," + (t.annulus.evaluated ? to_string(t.annulus.verdict) : "not_evaluated") +
               "," + format_number(t.annulus.min_margin) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Statistics used by the acceptance checks
// ---------------------------------------------------------------------------

/// Spearman rank correlation with average ranks for ties. Returns NaN when
/// either sample has zero variance.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && x.size() >= 2, "spearman: need two equal-length samples");
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();)
        {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
                ++j;
            const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t q = i; q <= j; ++q)
                r[idx[q]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace risil
