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

#include "nchc/experiment.hpp"

#include "nchc/error.hpp"
#include "nchc/io.hpp"
#include "nchc/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#ifndef NCHC_VERSION
#define NCHC_VERSION "0.0.0"
#endif

namespace nchc
{

namespace
{
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct KindName
{
    ExperimentKind kind;
    std::string_view name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::dh_mean, "dh_mean"},           {ExperimentKind::ch_variance, "ch_variance"},
    {ExperimentKind::accuracy_sweep, "accuracy_sweep"}, {ExperimentKind::heatmap, "heatmap"},
    {ExperimentKind::hciz_verify, "hciz_verify"},   {ExperimentKind::geometry_check, "geometry_check"},
};

struct EnsembleName
{
    Ensemble ensemble;
    std::string_view name;
};

constexpr EnsembleName kEnsembles[] = {
    {Ensemble::identity, "identity"},     {Ensemble::zero, "zero"},
    {Ensemble::diag12, "diag12"},         {Ensemble::semicircle, "semicircle"},
    {Ensemble::mp_unit_ratio, "mp_unit_ratio"},
};

bool is_grid_kind(ExperimentKind k)
{
    return k != ExperimentKind::hciz_verify && k != ExperimentKind::geometry_check;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join_fields(std::initializer_list<std::string> fields)
{
    std::string out;
    for (const auto &f : fields)
    {
        if (!out.empty())
            out += ',';
        out += f;
    }
    return out;
}

std::string fmt(double x) { return format_double(x); }
std::string fmt(long x) { return std::to_string(x); }
} // namespace

ExperimentKind parse_experiment(std::string_view name)
{
    for (const auto &k : kKinds)
        if (k.name == name)
            return k.kind;
    throw InputError("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind kind)
{
    for (const auto &k : kKinds)
        if (k.kind == kind)
            return k.name;
    return "unknown";
}

Ensemble parse_ensemble(std::string_view name)
{
    for (const auto &e : kEnsembles)
        if (e.name == name)
            return e.ensemble;
    throw InputError("unknown ensemble '" + std::string(name) + "'");
}

std::string_view to_string(Ensemble e)
{
    for (const auto &x : kEnsembles)
        if (x.ensemble == e)
            return x.name;
    return "unknown";
}

ExperimentConfig ExperimentConfig::with_defaults(ExperimentKind kind)
{
    ExperimentConfig c;
    c.kind = kind;
    c.apply_defaults();
    return c;
}

void ExperimentConfig::apply_defaults()
{
    const std::vector<double> sigma_grid = {0.01, 0.1, 0.3, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0};
    switch (kind)
    {
    case ExperimentKind::dh_mean:
        if (M.empty()) M = {1000};
        if (N.empty() && alpha.empty()) alpha = {1.0};
        if (sigma2.empty()) sigma2 = sigma_grid;
        if (trials <= 0) trials = 100;
        break;
    case ExperimentKind::ch_variance:
        if (M.empty()) M = {1000};
        if (N.empty() && alpha.empty()) alpha = {10.0};
        if (sigma2.empty()) sigma2 = sigma_grid;
        if (trials <= 0) trials = 2000;
        break;
    case ExperimentKind::accuracy_sweep:
        if (M.empty()) M = {1000};
        if (N.empty() && alpha.empty()) alpha = {10.0};
        if (sigma2.empty())
            for (double inv : {0.1, 0.125, 1.0 / 6.0, 0.25, 0.5, 1.0, 1.0 / 0.3, 10.0, 100.0})
                sigma2.push_back(1.0 / inv);
        if (trials <= 0) trials = 1000;
        break;
    case ExperimentKind::heatmap:
        if (M.empty()) M = {100, 200, 400, 800};
        if (N.empty() && alpha.empty()) N = {100, 200, 400, 800};
        if (sigma2.empty()) sigma2 = {5.0};
        if (trials <= 0) trials = 200;
        break;
    case ExperimentKind::hciz_verify:
        if (N.empty()) N = {50, 100, 200};
        if (ctheta.empty()) ctheta = {0.05, 0.1, 0.25};
        if (trials <= 0) trials = 1;
        break;
    case ExperimentKind::geometry_check:
        if (M.empty()) M = {1000};
        if (N.empty() && alpha.empty()) alpha = {1.0};
        if (sigma2.empty()) sigma2 = {1.0};
        if (trials <= 0) trials = 5;
        break;
    }
}

void ExperimentConfig::validate() const
{
    if (trials < 1)
        throw InputError("trials must be >= 1");
    if (workers < 1)
        throw InputError("workers must be >= 1");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw InputError("tol must be positive and finite");
    if (max_iter < 0)
        throw InputError("max_iter must be >= 0");
    if (kind == ExperimentKind::hciz_verify)
    {
        if (N.empty() || ctheta.empty())
            throw InputError("hciz_verify needs nonempty N and c*theta lists");
        for (long n : N)
            if (n < 2 || n > kSphericalMaxDim)
                throw InputError("hciz_verify: N must lie in [2, " + std::to_string(kSphericalMaxDim) + "]");
        for (double ct : ctheta)
            if (!(ct > 0.0) || !std::isfinite(ct))
                throw InputError("hciz_verify: c*theta must be positive");
        if (samples < kSphericalMinSamples)
            throw InputError("hciz_verify: samples must be >= " + std::to_string(kSphericalMinSamples));
        if (ensemble == Ensemble::diag12)
            for (long n : N)
                if (n != 2)
                    throw InputError("ensemble diag12 requires N = 2");
        return;
    }
    if (M.empty() || sigma2.empty() || (N.empty() && alpha.empty()))
        throw InputError("M, N (or alpha) and sigma2 lists must be nonempty");
    if (!N.empty() && !alpha.empty())
        throw InputError("give either N or alpha, not both");
    for (long m : M)
        if (m < 1)
            throw InputError("M must be >= 1");
    if (kind == ExperimentKind::geometry_check)
        for (long m : M)
            if (m < 100)
                throw InputError("geometry_check requires M >= 100");
    for (long n : N)
        if (n < 1)
            throw InputError("N must be >= 1");
    for (double a : alpha)
    {
        if (!(a > 0.0) || !std::isfinite(a))
            throw InputError("alpha must be positive");
        for (long m : M)
        {
            const double n = double(m) / a;
            if (std::abs(n - std::round(n)) > 1e-9 * n || std::round(n) < 1.0)
                throw InputError("alpha " + fmt(a) + " does not divide M = " + std::to_string(m));
        }
    }
    for (double s : sigma2)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw InputError("sigma2 must be finite and >= 0");
}

std::vector<GridPoint> expand_grid(const ExperimentConfig &config)
{
    std::vector<GridPoint> grid;
    for (long m : config.M)
    {
        std::vector<long> ns = config.N;
        for (double a : config.alpha)
            ns.push_back(std::lround(double(m) / a));
        for (long n : ns)
            for (double s : config.sigma2)
                grid.push_back({m, n, s});
    }
    return grid;
}

SeedStream trial_stream(std::uint64_t master_seed, ExperimentKind kind, long grid_index, long trial_index)
{
    return SeedStream(master_seed,
                      {std::uint64_t(kind), std::uint64_t(grid_index), std::uint64_t(trial_index)});
}

TrialRecord run_trial(const GridPoint &point, const SolverOptions &options, const SeedStream &stream, bool balanced)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params(point.M, point.N, point.sigma2);
    const TrainingSet train_a = make_training_set(params, stream.child(0));
    const TrainingSet train_b = make_training_set(params, stream.child(1));
    const HullSolver hull_a(train_a.Y);
    const HullSolver hull_b(train_b.Y);

    TrialRecord rec;
    const TestPoint test_a = make_test_point(train_a.H, point.sigma2, Label::a, stream.child(2));
    rec.sample = decision_sample(test_a.y0, hull_a, hull_b, options);
    if (balanced)
    {
        const TestPoint test_b = make_test_point(train_b.H, point.sigma2, Label::b, stream.child(3));
        rec.sample_b = decision_sample(test_b.y0, hull_b, hull_a, options);
    }
    rec.seconds = seconds_since(t0);
    return rec;
}

GridResult aggregate(const GridPoint &point, std::span<const TrialRecord> records)
{
    GridResult r;
    r.point = point;
    r.trials = long(records.size());
    std::vector<DecisionSample> a, b;
    a.reserve(records.size());
    for (const auto &rec : records)
    {
        if (rec.flagged())
        {
            ++r.flagged;
            continue;
        }
        a.push_back(rec.sample);
        if (rec.sample_b)
            b.push_back(*rec.sample_b);
    }
    r.predicted_misclass = kNaN;
    if (a.size() >= 2)
    {
        r.moments = moment_summary(a);
        if (r.moments->var_d > 0.0)
            r.predicted_misclass = std_normal_cdf(r.moments->mean_d / std::sqrt(r.moments->var_d));
    }
    if (!a.empty())
        r.misclass = empirical_misclassification(a);
    if (!b.empty())
    {
        r.misclass_b = empirical_misclassification(b);
        r.misclass_balanced = wilson_interval(r.misclass->errors + r.misclass_b->errors, r.misclass->n + r.misclass_b->n);
    }
    return r;
}

std::vector<TrialRecord> run_grid_point(const GridPoint &point, long grid_index, const ExperimentConfig &config)
{
    SolverOptions options;
    options.tol = config.tol;
    options.max_iter = config.max_iter;
    std::vector<TrialRecord> records(std::size_t(config.trials));
    parallel_for(config.trials, config.workers, [&](long t) {
        TrialRecord rec = run_trial(point, options, trial_stream(config.master_seed, config.kind, grid_index, t),
                                    config.balanced);
        rec.grid_index = grid_index;
        rec.trial_index = t;
        records[std::size_t(t)] = std::move(rec);
    });
    return records;
}

GeometryReport geometry_check(const GridPoint &point, long trials, const SeedStream &stream, int workers)
{
    if (point.M < 100)
        throw InputError("geometry_check requires M >= 100");
    if (trials < 1)
        throw InputError("geometry_check requires trials >= 1");

    struct PerTrial
    {
        double norm_stat, ks_qc, ks_mp, belt;
    };
    std::vector<PerTrial> per(static_cast<std::size_t>(trials));
    parallel_for(trials, workers, [&](long t) {
        const TrainingSet ts = make_training_set(ModelParams(point.M, point.N, point.sigma2), stream.child(std::uint64_t(t)));
        // One eigendecomposition serves both laws: singular values of H / sqrt(M)
        // are the square roots of the eigenvalues of H H^T / M.
        const SpectralSample eig = esd_eigenvalues(test_covariance(ts.H, 0.0));
        std::vector<double> sv(eig.eigenvalues.size());
        std::transform(eig.eigenvalues.begin(), eig.eigenvalues.end(), sv.begin(),
                       [](double l) { return std::sqrt(std::max(l, 0.0)); });
        const SpectralSample sing = SpectralSample::from_values(std::move(sv));
        const double scale = std::sqrt(point.sigma2 / double(point.M));
        per[std::size_t(t)] = {norm_concentration_stat(ts.X), spectral_law_ks(sing, SpectralLaw::quarter_circle_singular),
                               spectral_law_ks(eig, SpectralLaw::mp_unit_ratio_eigen),
                               scale * ts.noise.colwise().norm().mean()};
    });

    GeometryReport rep;
    rep.point = point;
    rep.trials = trials;
    for (const auto &p : per)
    {
        rep.norm_stat_mean += p.norm_stat;
        rep.norm_stat_max = std::max(rep.norm_stat_max, p.norm_stat);
        rep.ks_quarter_circle_mean += p.ks_qc;
        rep.ks_mp_mean += p.ks_mp;
        rep.ks_max = std::max({rep.ks_max, p.ks_qc, p.ks_mp});
        rep.belt_mean += p.belt;
    }
    const double inv = 1.0 / double(trials);
    rep.norm_stat_mean *= inv;
    rep.ks_quarter_circle_mean *= inv;
    rep.ks_mp_mean *= inv;
    rep.belt_mean *= inv;
    return rep;
}

Eigen::MatrixXd make_ensemble(Ensemble ensemble, long n, const SeedStream &stream)
{
    if (n < 1)
        throw InputError("ensemble dimension must be >= 1");
    RandomSource rng(stream);
    switch (ensemble)
    {
    case Ensemble::identity:
        return Eigen::MatrixXd::Identity(n, n);
    case Ensemble::zero:
        return Eigen::MatrixXd::Zero(n, n);
    case Ensemble::diag12:
        if (n != 2)
            throw InputError("ensemble diag12 requires N = 2");
        return Eigen::Vector2d(1.0, 2.0).asDiagonal().toDenseMatrix();
    case Ensemble::semicircle:
        return wigner_matrix(n, rng);
    case Ensemble::mp_unit_ratio:
        return wishart_unit_ratio(n, rng);
    }
    throw InputError("unknown ensemble");
}

std::vector<HcizRow> hciz_verify(Ensemble ensemble, std::span<const long> ns, std::span<const double> cthetas,
                                 long samples, const SeedStream &stream, int workers)
{
    std::vector<HcizRow> rows;
    for (std::size_t i = 0; i < ns.size(); ++i)
    {
        const long n = ns[i];
        const Eigen::MatrixXd B = make_ensemble(ensemble, n, stream.child({std::uint64_t(i), 0}));
        const SpectralSample spec = esd_eigenvalues(B);
        for (std::size_t j = 0; j < cthetas.size(); ++j)
        {
            HcizRow row;
            row.ensemble = ensemble;
            row.N = n;
            row.ctheta = cthetas[j];
            row.samples = samples;
            SphericalIntegralSpec sis;
            sis.B = B;
            sis.theta = row.ctheta;
            sis.c = 1.0;
            sis.samples = samples;
            const RateEstimateSE mc = spherical_integral_mc(sis, stream.child({std::uint64_t(i), std::uint64_t(1 + j)}), workers);
            row.mc_rate = mc.rate;
            row.mc_se = mc.se;
            row.prediction = free_fourier_prediction(spec, row.ctheta, 1.0);
            row.exact_n2 = kNaN;
            double reference = row.prediction;
            if (n == 2)
            {
                row.exact_n2 = spherical_integral_exact_n2(B.topLeftCorner<2, 2>(), row.ctheta, 1.0);
                reference = row.exact_n2;
            }
            row.deviation = std::abs(row.mc_rate - reference);
            if (ensemble == Ensemble::identity || ensemble == Ensemble::zero)
                row.tolerance = 1e-12;
            else if (n == 2)
                row.tolerance = 3.0 * row.mc_se;
            else
                row.tolerance = std::max(0.02, 3.0 * row.mc_se);
            row.pass = row.deviation <= row.tolerance;
            rows.push_back(row);
        }
    }
    return rows;
}

std::string aggregate_csv(ExperimentKind kind, std::span<const GridResult> rows)
{
    std::string out;
    for (const auto &c : aggregate_columns())
        out += (out.empty() ? "" : ",") + c;
    out += '\n';
    for (const auto &r : rows)
    {
        const double m = double(r.point.M);
        const double m2 = m * m;
        const auto &mo = r.moments;
        auto mom = [&](double v, double scale) { return mo ? fmt(v / scale) : std::string("nan"); };
        out += join_fields({std::string(to_string(kind)), fmt(r.point.M), fmt(r.point.N), fmt(r.point.alpha()),
                            fmt(r.point.sigma2), fmt(r.trials), mom(mo ? mo->mean_daa : 0, m),
                            mom(mo ? mo->var_daa : 0, m2), mom(mo ? mo->mean_dab : 0, m), mom(mo ? mo->var_dab : 0, m2),
                            mom(mo ? mo->var_sum : 0, m2), mom(mo ? mo->mean_d : 0, m), mom(mo ? mo->var_d : 0, m2),
                            r.misclass ? fmt(r.misclass->rate) : "nan", r.misclass ? fmt(r.misclass->ci_lo) : "nan",
                            r.misclass ? fmt(r.misclass->ci_hi) : "nan", fmt(r.predicted_misclass), fmt(r.flagged)});
        out += '\n';
    }
    return out;
}

namespace
{
std::string trials_csv_header(bool balanced)
{
    std::string h = "grid_index,trial_index,M,N,sigma2,d_aa,d_ab,d,label,gap_aa,gap_ab,flagged";
    if (balanced)
        h += ",b_d_bb,b_d_ba,b_d,b_label,b_flagged";
    return h + '\n';
}

void append_trial_rows(std::string &out, const GridPoint &p, std::span<const TrialRecord> records, bool balanced)
{
    for (const auto &rec : records)
    {
        const auto &s = rec.sample;
        out += join_fields({fmt(rec.grid_index), fmt(rec.trial_index), fmt(p.M), fmt(p.N), fmt(p.sigma2), fmt(s.d_aa),
                            fmt(s.d_ab), fmt(s.d), std::string(to_string(s.label)), fmt(s.gap_aa), fmt(s.gap_ab),
                            s.flagged ? "1" : "0"});
        if (balanced && rec.sample_b)
        {
            const auto &b = *rec.sample_b;
            out += ',' + join_fields({fmt(b.d_aa), fmt(b.d_ab), fmt(b.d), std::string(to_string(b.label)),
                                      b.flagged ? "1" : "0"});
        }
        out += '\n';
    }
}

std::string balanced_csv(ExperimentKind kind, std::span<const GridResult> rows)
{
    std::string out = "experiment,M,N,alpha,sigma2,trials,misclass_a,ci_lo_a,ci_hi_a,misclass_b,ci_lo_b,ci_hi_b,"
                      "misclass_balanced,ci_lo_balanced,ci_hi_balanced,flagged_trials\n";
    for (const auto &r : rows)
    {
        auto rate = [](const std::optional<RateEstimate> &e) {
            return e ? join_fields({fmt(e->rate), fmt(e->ci_lo), fmt(e->ci_hi)}) : std::string("nan,nan,nan");
        };
        out += join_fields({std::string(to_string(kind)), fmt(r.point.M), fmt(r.point.N), fmt(r.point.alpha()),
                            fmt(r.point.sigma2), fmt(r.trials), rate(r.misclass), rate(r.misclass_b),
                            rate(r.misclass_balanced), fmt(r.flagged)});
        out += '\n';
    }
    return out;
}

std::string geometry_csv(std::span<const GeometryReport> reps)
{
    std::string out = "M,N,sigma2,trials,norm_stat_mean,norm_stat_max,ks_quarter_circle_mean,ks_mp_mean,ks_max,"
                      "belt_mean,sigma\n";
    for (const auto &g : reps)
    {
        out += join_fields({fmt(g.point.M), fmt(g.point.N), fmt(g.point.sigma2), fmt(g.trials), fmt(g.norm_stat_mean),
                            fmt(g.norm_stat_max), fmt(g.ks_quarter_circle_mean), fmt(g.ks_mp_mean), fmt(g.ks_max),
                            fmt(g.belt_mean), fmt(std::sqrt(g.point.sigma2))});
        out += '\n';
    }
    return out;
}

std::string hciz_csv(std::span<const HcizRow> rows)
{
    std::string out = "ensemble,N,c_theta,samples,mc_rate,mc_se,prediction,exact_n2,deviation,tolerance,pass\n";
    for (const auto &r : rows)
    {
        out += join_fields({std::string(to_string(r.ensemble)), fmt(r.N), fmt(r.ctheta), fmt(r.samples),
                            fmt(r.mc_rate), fmt(r.mc_se), fmt(r.prediction), fmt(r.exact_n2), fmt(r.deviation),
                            fmt(r.tolerance), r.pass ? "1" : "0"});
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json config_json(const ExperimentConfig &c)
{
    nlohmann::ordered_json j;
    j["experiment"] = std::string(to_string(c.kind));
    j["M"] = c.M;
    j["N"] = c.N;
    j["alpha"] = c.alpha;
    j["sigma2"] = c.sigma2;
    j["trials"] = c.trials;
    j["master_seed"] = c.master_seed;
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    j["max_iter_rule"] = c.max_iter > 0 ? "fixed" : "50*N";
    j["per_trial"] = c.per_trial;
    j["balanced"] = c.balanced;
    j["workers"] = c.workers;
    if (c.kind == ExperimentKind::hciz_verify)
    {
        j["ctheta"] = c.ctheta;
        j["ensemble"] = std::string(to_string(c.ensemble));
        j["samples"] = c.samples;
    }
    return j;
}
} // namespace

RunOutput run_experiment(const ExperimentConfig &config_in)
{
    ExperimentConfig config = config_in;
    config.apply_defaults();
    config.validate();
    if (config.out_dir.empty())
        throw InputError("output directory not set");

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir))
        throw IoError("cannot create output directory " + config.out_dir);

    const auto t_start = std::chrono::steady_clock::now();
    RunOutput out;
    std::vector<std::pair<std::string, std::string>> files;   // name, content
    double trial_seconds_sum = 0.0, trial_seconds_max = 0.0;
    long trial_count = 0;

    if (is_grid_kind(config.kind))
    {
        const auto grid = expand_grid(config);
        std::string trials_text = trials_csv_header(config.balanced);
        for (std::size_t g = 0; g < grid.size(); ++g)
        {
            const auto records = run_grid_point(grid[g], long(g), config);
            for (const auto &rec : records)
            {
                trial_seconds_sum += rec.seconds;
                trial_seconds_max = std::max(trial_seconds_max, rec.seconds);
            }
            trial_count += long(records.size());
            out.grid.push_back(aggregate(grid[g], records));
            out.flagged += out.grid.back().flagged;
            if (config.per_trial)
                append_trial_rows(trials_text, grid[g], records, config.balanced);
        }
        files.emplace_back("aggregate.csv", aggregate_csv(config.kind, out.grid));
        if (config.balanced)
            files.emplace_back("balanced.csv", balanced_csv(config.kind, out.grid));
        if (config.per_trial)
            files.emplace_back("trials.csv", std::move(trials_text));
        if (trial_count > 0 && double(out.flagged) > 0.01 * double(trial_count))
            out.warnings.push_back(std::to_string(out.flagged) + " of " + std::to_string(trial_count) +
                                   " trials flagged (non-converged solves), above the 1% threshold");
    }
    else if (config.kind == ExperimentKind::geometry_check)
    {
        const auto grid = expand_grid(config);
        for (std::size_t g = 0; g < grid.size(); ++g)
            out.geometry.push_back(geometry_check(
                grid[g], config.trials,
                SeedStream(config.master_seed, {std::uint64_t(config.kind), std::uint64_t(g)}), config.workers));
        files.emplace_back("geometry.csv", geometry_csv(out.geometry));
    }
    else
    {
        out.hciz = hciz_verify(config.ensemble, config.N, config.ctheta, config.samples,
                               SeedStream(config.master_seed, {std::uint64_t(config.kind)}), config.workers);
        files.emplace_back("hciz.csv", hciz_csv(out.hciz));
        for (const auto &r : out.hciz)
            if (!r.pass)
                out.warnings.push_back("hciz point ensemble=" + std::string(to_string(r.ensemble)) +
                                       " N=" + std::to_string(r.N) + " c_theta=" + fmt(r.ctheta) +
                                       " outside tolerance");
    }

    nlohmann::ordered_json checksums;
    for (const auto &[name, content] : files)
    {
        write_file((fs::path(config.out_dir) / name).string(), content);
        checksums[name] = "sha256:" + sha256_hex(content);
        out.files.push_back(name);
    }

    nlohmann::ordered_json manifest;
    manifest["version"] = NCHC_VERSION;
    manifest["config"] = config_json(config);
    manifest["rng"] = {{"algorithm", kRngAlgorithm},
                       {"uniform", kUniformMethod},
                       {"normal", kNormalMethod},
                       {"stream_derivation", kStreamDerivation},
                       {"stream_path", "(experiment_id, grid_index, trial_index, object)"},
                       {"experiment_id", int(config.kind)}};
    manifest["timing"] = {{"wall_seconds", seconds_since(t_start)},
                          {"trials", trial_count},
                          {"per_trial_mean_seconds", trial_count ? trial_seconds_sum / double(trial_count) : 0.0},
                          {"per_trial_max_seconds", trial_seconds_max}};
    manifest["flagged_trials"] = out.flagged;
    manifest["warnings"] = out.warnings;
    manifest["outputs"] = checksums;
    write_file((fs::path(config.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    out.files.push_back("manifest.json");
    return out;
}

} // namespace nchc
