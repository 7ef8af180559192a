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

// Command-line front end: Monte Carlo experiments, RIS solves on dumped
// quadratic forms, and the zero-IL necessary-condition check.

#include "risil/risil.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace risil;

namespace
{

void write_or_print(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_file(path, text);
}

std::string ris_csv(const std::vector<RisVector>& solutions)
{
    std::string out = "solution,m,re,im,abs,phase\n";
    for (std::size_t s = 0; s < solutions.size(); ++s)
        for (int m = 0; m < solutions[s].size(); ++m)
        {
            const cdouble v = solutions[s].r(m);
            out += std::to_string(s) + "," + std::to_string(m) + "," + format_number(v.real()) + "," +
                   format_number(v.imag()) + "," + format_number(std::abs(v)) + "," + format_number(std::arg(v)) +
                   "\n";
        }
    return out;
}

std::string trajectory_csv(const std::vector<double>& il)
{
    std::string out = "sweep,il\n";
    for (std::size_t i = 0; i < il.size(); ++i)
        out += std::to_string(i) + "," + format_number(il[i]) + "\n";
    return out;
}

json complex_vector_json(const CVec& v)
{
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back({{"re", v(i).real()}, {"im", v(i).imag()}});
    return arr;
}

json real_vector_json(const RVec& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"risil: interference leakage minimization for RIS-assisted MIMO interference channels"};
    app.require_subcommand(1);

    // simulate-sumrate / simulate-feasibility
    std::string config_path, out_path, trial_log;
    int trials_override = 0;
    auto add_sim = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "Output CSV (defaults to the config's output field)");
        sub->add_option("--trial-log", trial_log, "Optional per-trial CSV");
        sub->add_option("--trials", trials_override, "Override the trial count");
        return sub;
    };
    auto* sumrate = add_sim("simulate-sumrate", "Sum rate vs SNR");
    auto* feas = add_sim("simulate-feasibility", "Zero-IL probability vs number of RIS elements");

    // dump-quadratic-form
    std::string scenario_path, qf_out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int ris_elements = 0;
    auto* dump = app.add_subcommand("dump-quadratic-form", "Sample a realization and write its (T, s, Sigma)");
    dump->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    dump->add_option("--out", qf_out, "Output dump file")->required();
    dump->add_option("--seed", seed, "Override the scenario seed")->each([&](const std::string&) { seed_given = true; });
    dump->add_option("--ris-elements", ris_elements, "Override M");

    // solve
    std::string qf_in, mode_name = "unit", traj_out;
    int max_sweeps = 5000, restarts = 0;
    double tol = 1e-12;
    auto* solve = app.add_subcommand("solve", "Optimize the RIS for a dumped quadratic form");
    solve->add_option("--in", qf_in, "Quadratic-form dump")->required()->check(CLI::ExistingFile);
    solve->add_option("--mode", mode_name, "active | unit | analytic-m2")
        ->check(CLI::IsMember({"active", "unit", "analytic-m2"}));
    solve->add_option("--max-sweeps", max_sweeps, "BCD sweep budget");
    solve->add_option("--tol", tol, "Relative IL decrease per sweep that stops BCD");
    solve->add_option("--restarts", restarts, "Extra uniform-random BCD starts");
    solve->add_option("--seed", seed, "Seed for random restarts");
    solve->add_option("--out", out_path, "RIS coefficients CSV (stdout if omitted)");
    solve->add_option("--trajectory", traj_out, "IL trajectory CSV");

    // check-feasibility
    auto* check = app.add_subcommand("check-feasibility", "Necessary conditions for a zero-IL unit-modulus RIS");
    check->add_option("--in", qf_in, "Quadratic-form dump")->required()->check(CLI::ExistingFile);
    check->add_option("--out", out_path, "Report JSON (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*sumrate || *feas)
        {
            ExperimentConfig cfg = load_experiment(config_path);
            if (trials_override > 0)
                cfg.trials = trials_override;
            if (*sumrate)
                cfg.kind = ExperimentKind::sumrate;
            else
                cfg.kind = ExperimentKind::feasibility;
            const std::string out = out_path.empty() ? cfg.output : out_path;
            const std::string log = trial_log.empty() ? cfg.trial_log : trial_log;
            std::vector<TrialRecord> records;
            if (*sumrate)
            {
                const auto res = run_sumrate(cfg);
                write_or_print(out, sumrate_csv(res));
                records = res.trials;
            }
            else
            {
                const auto res = run_feasibility(cfg);
                write_or_print(out, feasibility_csv(res));
                records = res.trials;
            }
            if (!log.empty())
                write_file(log, trial_log_csv(records));
        }
        else if (*dump)
        {
            Scenario sc = load_scenario(scenario_path);
            if (seed_given)
                sc.seed = seed;
            if (ris_elements > 0)
                sc.geometry.ris_elements = ris_elements;
            const ChannelSet ch = sample_channels(sc.geometry, sc.fading, sc.seed);
            const TxRxConfig txrx = random_txrx(sc.geometry, substream_seed(sc.seed, 1));
            save_quadratic_form(qf_out, assemble_quadratic_form(ch, txrx));
        }
        else if (*solve)
        {
            const QuadraticForm qf = load_quadratic_form(qf_in);
            std::vector<RisVector> solutions;
            std::vector<double> trajectory;
            if (mode_name == "active")
            {
                const RisVector r = active_minimizer(qf).ris;
                trajectory.push_back(qf.evaluate(r.r));
                solutions.push_back(r);
            }
            else if (mode_name == "unit")
            {
                const SubspaceDecomposition dec = decompose_spectrum(qf);
                const LeakageFactor f = factor_from_decomposition(qf, dec);
                BcdOptions opts;
                opts.max_sweeps = max_sweeps;
                opts.tol = tol;
                auto [best, rep] = bcd_solve(f, default_initialization(qf), opts);
                for (int q = 0; q < restarts; ++q)
                {
                    auto [r, rq] = bcd_solve(f, random_initialization(qf.ris_elements(), substream_seed(seed, q)), opts);
                    if (rq.final_il < rep.final_il)
                    {
                        best = std::move(r);
                        rep = std::move(rq);
                    }
                }
                solutions.push_back(best);
                trajectory = rep.il_trajectory;
                std::cerr << "sweeps=" << rep.sweeps << " converged=" << rep.converged
                          << " final_il=" << format_number(rep.final_il) << "\n";
            }
            else
            {
                solutions = m2_solutions(qf, decompose(qf));
                for (const auto& r : solutions)
                    trajectory.push_back(qf.evaluate(r.r));
            }
            write_or_print(out_path, ris_csv(solutions));
            if (!traj_out.empty())
                write_file(traj_out, trajectory_csv(trajectory));
        }
        else if (*check)
        {
            const QuadraticForm qf = load_quadratic_form(qf_in);
            const SubspaceDecomposition dec = decompose(qf);
            const ActiveSolution act = active_solve(qf, dec);
            const FeasibilityReport rep = check_annulus_conditions(dec, act.alpha);
            const json report = {{"alpha", complex_vector_json(rep.alpha)},
                                 {"inner_radii", real_vector_json(rep.inner_radii)},
                                 {"outer_radii", real_vector_json(rep.outer_radii)},
                                 {"margins", real_vector_json(rep.margins)},
                                 {"verdict", to_string(rep.verdict)},
                                 {"eigenvalue_gaps", real_vector_json(rep.eigenvalue_gaps)},
                                 {"near_degenerate", rep.near_degenerate},
                                 {"numerical_rank", dec.numerical_rank},
                                 {"g", qf.g}};
            write_or_print(out_path, report.dump(2) + "\n");
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
