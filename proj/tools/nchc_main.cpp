// SPDX-License-Identifier: Apache-2.0
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

#include "nchc/error.hpp"
#include "nchc/experiment.hpp"
#include "nchc/io.hpp"
#include "nchc/reference.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace
{
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCompare = 2;
constexpr int kExitRuntime = 3;

struct RunArgs
{
    std::vector<long> m, n;
    std::vector<double> alpha, sigma2, inv_sigma2, ctheta;
    long trials = 0;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    long max_iter = 0;
    std::string out;
    bool per_trial = false;
    bool balanced = false;
    int workers = 1;
    std::string ensemble = "mp_unit_ratio";
    long samples = 20000;
};

void add_run_options(CLI::App &sub, RunArgs &a, bool hciz)
{
    sub.add_option("--m", a.m, "Antenna counts M (comma separated)")->delimiter(',');
    sub.add_option("--n", a.n, "Training lengths N (comma separated)")->delimiter(',');
    if (!hciz)
    {
        sub.add_option("--alpha", a.alpha, "Load ratios M/N, instead of --n")->delimiter(',');
        sub.add_option("--sigma2", a.sigma2, "Noise powers")->delimiter(',');
        sub.add_option("--inv-sigma2", a.inv_sigma2, "Inverse noise powers 1/sigma2")->delimiter(',');
        sub.add_option("--trials", a.trials, "Trials per grid point")->check(CLI::PositiveNumber);
        sub.add_option("--tol", a.tol, "Relative dual-gap tolerance")->check(CLI::PositiveNumber);
        sub.add_option("--max-iter", a.max_iter, "Solver iteration cap (0: 50 N)")->check(CLI::NonNegativeNumber);
        sub.add_flag("--per-trial", a.per_trial, "Also write trials.csv");
        sub.add_flag("--balanced", a.balanced, "Also classify a test point of user b; writes balanced.csv");
    }
    else
    {
        sub.add_option("--ctheta", a.ctheta, "Values of c*theta")->delimiter(',');
        sub.add_option("--ensemble", a.ensemble, "identity | zero | diag12 | semicircle | mp_unit_ratio");
        sub.add_option("--samples", a.samples, "Monte Carlo samples per point");
    }
    sub.add_option("--seed", a.seed, "Master seed");
    sub.add_option("--out", a.out, "Output directory")->required();
    sub.add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
}

nchc::ExperimentConfig to_config(nchc::ExperimentKind kind, const RunArgs &a)
{
    nchc::ExperimentConfig c;
    c.kind = kind;
    c.M = a.m;
    c.N = a.n;
    c.alpha = a.alpha;
    c.sigma2 = a.sigma2;
    for (double inv : a.inv_sigma2)
    {
        if (!(inv > 0.0))
            throw nchc::InputError("--inv-sigma2 values must be positive");
        c.sigma2.push_back(1.0 / inv);
    }
    c.trials = a.trials;
    c.master_seed = a.seed;
    c.tol = a.tol;
    c.max_iter = a.max_iter;
    c.out_dir = a.out;
    c.per_trial = a.per_trial;
    c.balanced = a.balanced;
    c.workers = a.workers;
    c.ctheta = a.ctheta;
    c.ensemble = nchc::parse_ensemble(a.ensemble);
    c.samples = a.samples;
    c.apply_defaults();
    c.validate();
    return c;
}

void print_summary(const nchc::RunOutput &out)
{
    for (const auto &g : out.grid)
    {
        std::printf("M=%ld N=%ld sigma2=%s", g.point.M, g.point.N, nchc::format_double(g.point.sigma2).c_str());
        if (g.moments)
            std::printf("  mean_daa/M=%.6g var_dab/M=%.6g", g.moments->mean_daa / double(g.point.M),
                        g.moments->var_dab / double(g.point.M * g.point.M));
        if (g.misclass)
            std::printf("  misclass=%.4f [%.4f, %.4f] predicted=%.4f", g.misclass->rate, g.misclass->ci_lo,
                        g.misclass->ci_hi, g.predicted_misclass);
        std::printf("  flagged=%ld\n", g.flagged);
    }
    for (const auto &r : out.geometry)
        std::printf("M=%ld sigma2=%g  norm_stat=%.4g  ks_qc=%.4g  ks_mp=%.4g  belt=%.4g\n", r.point.M, r.point.sigma2,
                    r.norm_stat_max, r.ks_quarter_circle_mean, r.ks_mp_mean, r.belt_mean);
    for (const auto &h : out.hciz)
        std::printf("%s N=%ld ctheta=%g  mc=%.6g +- %.2g  prediction=%.6g  %s\n",
                    std::string(nchc::to_string(h.ensemble)).c_str(), h.N, h.ctheta, h.mc_rate, h.mc_se,
                    h.prediction, h.pass ? "ok" : "OUTSIDE TOLERANCE");
    for (const auto &w : out.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());
}
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Nearest convex hull classification experiments"};
    app.require_subcommand(1);

    const char *kinds[] = {"dh_mean", "ch_variance", "accuracy_sweep", "heatmap", "hciz_verify", "geometry_check"};
    std::vector<RunArgs> run_args(std::size(kinds));
    std::vector<CLI::App *> run_cmds;
    for (std::size_t i = 0; i < std::size(kinds); ++i)
    {
        auto *sub = app.add_subcommand(kinds[i], std::string("Run the ") + kinds[i] + " experiment");
        add_run_options(*sub, run_args[i], std::string_view(kinds[i]) == "hciz_verify");
        run_cmds.push_back(sub);
    }

    std::string results, reference, report_path;
    double rtol = 0.02, atol = 0.0;
    auto *cmp = app.add_subcommand("compare", "Compare results against a bundled reference table");
    cmp->add_option("--results", results, "Result directory or aggregate CSV")->required();
    cmp->add_option("--reference", reference,
                    "fig3_numeric | fig3_replica | fig4_numeric | fig4_replica | fig5_numeric | fig5_replica")
        ->required();
    cmp->add_option("--rtol", rtol, "Relative tolerance")->check(CLI::NonNegativeNumber);
    cmp->add_option("--atol", atol, "Absolute tolerance")->check(CLI::NonNegativeNumber);
    cmp->add_option("--report", report_path, "Write the deviation report CSV here");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitUsage;
    }

    try
    {
        if (cmp->parsed())
        {
            const auto source = nchc::parse_reference_source(reference);
            const auto table = nchc::load_reference(source);
            const auto points = nchc::read_results(results, nchc::reference_metric(source));
            const auto rep = nchc::compare_reference(points, table, rtol, atol);
            const std::string csv = rep.to_csv();
            std::fputs(csv.c_str(), stdout);
            if (!report_path.empty())
                nchc::write_file(report_path, csv);
            std::printf("# %zu points compared, %ld flagged, %zu gaps: %s\n", rep.rows.size(), rep.flagged_count(),
                        rep.gaps.size(), rep.pass() ? "PASS" : "FAIL");
            return rep.pass() ? kExitOk : kExitCompare;
        }
        for (std::size_t i = 0; i < run_cmds.size(); ++i)
        {
            if (!run_cmds[i]->parsed())
                continue;
            nchc::ExperimentConfig config;
            try
            {
                config = to_config(nchc::parse_experiment(kinds[i]), run_args[i]);
            }
            catch (const nchc::InputError &e)
            {
                std::fprintf(stderr, "error: %s\n", e.what());
                return kExitUsage;
            }
            print_summary(nchc::run_experiment(config));
            return kExitOk;
        }
    }
    catch (const nchc::InputError &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
