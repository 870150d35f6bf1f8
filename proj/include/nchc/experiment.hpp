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

#ifndef NCHC_EXPERIMENT_HPP
#define NCHC_EXPERIMENT_HPP

#include "nchc/classifier.hpp"
#include "nchc/freeprob.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nchc
{

enum class ExperimentKind
{
    dh_mean = 1,
    ch_variance = 2,
    accuracy_sweep = 3,
    heatmap = 4,
    hciz_verify = 5,
    geometry_check = 6
};

ExperimentKind parse_experiment(std::string_view name);
std::string_view to_string(ExperimentKind kind);

enum class Ensemble
{
    identity,
    zero,
    diag12,        // diag(1, 2), N = 2 only
    semicircle,
    mp_unit_ratio
};

Ensemble parse_ensemble(std::string_view name);
std::string_view to_string(Ensemble e);

struct ExperimentConfig
{
    ExperimentKind kind = ExperimentKind::accuracy_sweep;
    std::vector<long> M;
    std::vector<long> N;             // either N or alpha; alpha sets N = M / alpha
    std::vector<double> alpha;
    std::vector<double> sigma2;
    long trials = 0;
    std::uint64_t master_seed = 1;
    double tol = 1e-6;
    long max_iter = 0;               // 0: 50 N
    std::string out_dir;
    bool per_trial = false;
    bool balanced = false;           // also classify a test point of user b per trial
    int workers = 1;

    // hciz_verify
    std::vector<double> ctheta;
    Ensemble ensemble = Ensemble::mp_unit_ratio;
    long samples = 20000;

    // Fills empty fields with the defaults of `kind`.
    static ExperimentConfig with_defaults(ExperimentKind kind);
    void apply_defaults();
    void validate() const;
};

struct GridPoint
{
    long M = 0;
    long N = 0;
    double sigma2 = 0.0;

    double alpha() const { return double(M) / double(N); }
};

// Cartesian product M x (N | alpha) x sigma2 in that nesting order.
std::vector<GridPoint> expand_grid(const ExperimentConfig &config);

struct TrialRecord
{
    long grid_index = 0;
    long trial_index = 0;
    DecisionSample sample;                   // test point of user a
    std::optional<DecisionSample> sample_b;  // test point of user b against (hull b, hull a); label a = correct
    double seconds = 0.0;                    // wall time, reported in the manifest only

    bool flagged() const { return sample.flagged || (sample_b && sample_b->flagged); }
};

// Stream layout of one trial: path (experiment, grid_index, trial_index, object)
// with object 0 = training a, 1 = training b, 2 = test point a, 3 = test point b.
SeedStream trial_stream(std::uint64_t master_seed, ExperimentKind kind, long grid_index, long trial_index);

TrialRecord run_trial(const GridPoint &point, const SolverOptions &options, const SeedStream &stream, bool balanced);

struct GridResult
{
    GridPoint point;
    long trials = 0;
    long flagged = 0;
    std::optional<MomentSummary> moments;    // over unflagged trials; absent if fewer than two
    std::optional<RateEstimate> misclass;    // over unflagged trials
    double predicted_misclass = 0.0;         // NaN when moments are unavailable
    std::optional<RateEstimate> misclass_b;  // balanced runs only
    std::optional<RateEstimate> misclass_balanced;
};

GridResult aggregate(const GridPoint &point, std::span<const TrialRecord> records);

// Runs all trials of one grid point on `workers` threads. Records come back
// sorted by trial index regardless of scheduling.
std::vector<TrialRecord> run_grid_point(const GridPoint &point, long grid_index, const ExperimentConfig &config);

struct GeometryReport
{
    GridPoint point;
    long trials = 0;
    double norm_stat_mean = 0.0;
    double norm_stat_max = 0.0;
    double ks_quarter_circle_mean = 0.0;
    double ks_mp_mean = 0.0;
    double ks_max = 0.0;
    double belt_mean = 0.0;      // mean over columns and trials of ||sigma n_i|| / sqrt(M)
};

GeometryReport geometry_check(const GridPoint &point, long trials, const SeedStream &stream, int workers = 1);

struct HcizRow
{
    Ensemble ensemble = Ensemble::identity;
    long N = 0;
    double ctheta = 0.0;
    long samples = 0;
    double mc_rate = 0.0;
    double mc_se = 0.0;
    double prediction = 0.0;
    double exact_n2 = 0.0;       // NaN unless N = 2
    double deviation = 0.0;      // |mc - reference|, reference = exact_n2 at N = 2 else prediction
    double tolerance = 0.0;
    bool pass = false;
};

Eigen::MatrixXd make_ensemble(Ensemble ensemble, long n, const SeedStream &stream);

// B is drawn once per N (stream child {n_index, 0}); the Monte Carlo for each
// (N, c theta) point uses child {n_index, 1 + ct_index}.
std::vector<HcizRow> hciz_verify(Ensemble ensemble, std::span<const long> ns, std::span<const double> cthetas,
                                 long samples, const SeedStream &stream, int workers = 1);

struct RunOutput
{
    std::vector<GridResult> grid;
    std::vector<GeometryReport> geometry;
    std::vector<HcizRow> hciz;
    std::vector<std::string> files;      // written files, relative to out_dir
    std::vector<std::string> warnings;
    long flagged = 0;
};

// Runs the configured experiment and writes its CSV outputs plus
// manifest.json (written last) into config.out_dir.
RunOutput run_experiment(const ExperimentConfig &config);

// CSV text of the aggregate table; one row per grid point.
std::string aggregate_csv(ExperimentKind kind, std::span<const GridResult> rows);

inline const std::vector<std::string> &aggregate_columns()
{
    static const std::vector<std::string> cols = {
        "experiment",      "M",              "N",               "alpha",          "sigma2",
        "trials",          "mean_daa_over_M", "var_daa_over_M", "mean_dab_over_M", "var_dab_over_M",
        "var_sum_over_M",  "mean_d_over_M",  "var_d_over_M",    "misclass_rate",  "misclass_ci_lo",
        "misclass_ci_hi",  "predicted_misclass", "flagged_trials"};
    return cols;
}

} // namespace nchc

#endif
