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

// Python bindings. Matrices cross the boundary as float64 NumPy arrays.

#include "nchc/classifier.hpp"
#include "nchc/error.hpp"
#include "nchc/experiment.hpp"
#include "nchc/freeprob.hpp"
#include "nchc/hull.hpp"
#include "nchc/model.hpp"
#include "nchc/reference.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace nchc;

namespace
{
std::string label_name(Label l)
{
    return std::string(to_string(l));
}

Label parse_label(const std::string &s)
{
    if (s == "a")
        return Label::a;
    if (s == "b")
        return Label::b;
    throw InputError("label must be 'a' or 'b', got '" + s + "'");
}

SeedStream make_stream(std::uint64_t seed, std::vector<std::uint64_t> path)
{
    return SeedStream(seed, std::move(path));
}

SpectralSample spectrum(const std::vector<double> &values)
{
    return SpectralSample::from_values(values);
}
} // namespace

PYBIND11_MODULE(_nchc, m)
{
    m.doc() = "Nearest convex hull classification of noisy linear observations";
    m.attr("__version__") = NCHC_PY_VERSION;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<HullProjection>(m, "HullProjection")
        .def_readonly("weights", &HullProjection::v)
        .def_readonly("distance", &HullProjection::distance)
        .def_readonly("dual_gap", &HullProjection::dual_gap)
        .def_readonly("iterations", &HullProjection::iterations)
        .def_readonly("converged", &HullProjection::converged)
        .def_readonly("objective_trace", &HullProjection::objective_trace)
        .def("__repr__", [](const HullProjection &p) {
            return "HullProjection(distance=" + std::to_string(p.distance) + ", dual_gap=" + std::to_string(p.dual_gap) +
                   ", iterations=" + std::to_string(p.iterations) + ", converged=" + (p.converged ? "True" : "False") + ")";
        });

    m.def(
        "project_onto_hull",
        [](const Eigen::MatrixXd &Y, const Eigen::VectorXd &y0, double tol, long max_iter,
           std::optional<Eigen::VectorXd> warm_start) {
            HullProblem p;
            p.Y = Y;
            p.y0 = y0;
            p.tol = tol;
            p.max_iter = max_iter;
            p.warm_start = std::move(warm_start);
            py::gil_scoped_release release;
            return project_onto_hull(p);
        },
        py::arg("Y"), py::arg("y0"), py::arg("tol") = 1e-6, py::arg("max_iter") = 0, py::arg("warm_start") = py::none(),
        "Squared distance from y0 to the convex hull of the columns of Y (away-step Frank-Wolfe).");

    m.def(
        "reference_distance",
        [](const Eigen::MatrixXd &Y, const Eigen::VectorXd &y0) {
            HullProblem p;
            p.Y = Y;
            p.y0 = y0;
            return reference_distance_small(p);
        },
        py::arg("Y"), py::arg("y0"), "Exact projection by face enumeration; at most 12 vertices.");

    m.def(
        "fw_dual_gap",
        [](const Eigen::MatrixXd &Y, const Eigen::VectorXd &y0, const Eigen::VectorXd &v) {
            HullProblem p;
            p.Y = Y;
            p.y0 = y0;
            return fw_dual_gap(p, v);
        },
        py::arg("Y"), py::arg("y0"), py::arg("weights"));

    py::class_<TrainingSet>(m, "TrainingSet")
        .def_readonly("H", &TrainingSet::H)
        .def_readonly("X", &TrainingSet::X)
        .def_readonly("noise", &TrainingSet::noise)
        .def_readonly("Y", &TrainingSet::Y);

    py::class_<TestPoint>(m, "TestPoint")
        .def_readonly("y0", &TestPoint::y0)
        .def_readonly("x0", &TestPoint::x0)
        .def_readonly("n0", &TestPoint::n0)
        .def_property_readonly("true_label", [](const TestPoint &t) { return label_name(t.true_label); });

    m.def(
        "make_training_set",
        [](long M, long N, double sigma2, std::uint64_t seed, std::vector<std::uint64_t> path) {
            return make_training_set(ModelParams(M, N, sigma2), make_stream(seed, std::move(path)));
        },
        py::arg("M"), py::arg("N"), py::arg("sigma2"), py::arg("seed"), py::arg("path") = std::vector<std::uint64_t>{});

    m.def(
        "make_test_point",
        [](const Eigen::MatrixXd &H, double sigma2, const std::string &label, std::uint64_t seed,
           std::vector<std::uint64_t> path) {
            return make_test_point(H, sigma2, parse_label(label), make_stream(seed, std::move(path)));
        },
        py::arg("H"), py::arg("sigma2"), py::arg("label"), py::arg("seed"), py::arg("path") = std::vector<std::uint64_t>{});

    m.def("test_covariance", &test_covariance, py::arg("H"), py::arg("sigma2"));

    py::class_<DecisionSample>(m, "DecisionSample")
        .def_readonly("d_aa", &DecisionSample::d_aa)
        .def_readonly("d_ab", &DecisionSample::d_ab)
        .def_readonly("d", &DecisionSample::d)
        .def_readonly("gap_aa", &DecisionSample::gap_aa)
        .def_readonly("gap_ab", &DecisionSample::gap_ab)
        .def_readonly("flagged", &DecisionSample::flagged)
        .def_property_readonly("label", [](const DecisionSample &s) { return label_name(s.label); });

    m.def(
        "decision_sample",
        [](const Eigen::VectorXd &y0, const Eigen::MatrixXd &Y_a, const Eigen::MatrixXd &Y_b, double tol, long max_iter) {
            py::gil_scoped_release release;
            const HullSolver a(Y_a), b(Y_b);
            SolverOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            return decision_sample(y0, a, b, opts);
        },
        py::arg("y0"), py::arg("Y_a"), py::arg("Y_b"), py::arg("tol") = 1e-6, py::arg("max_iter") = 0);

    m.def("classify", [](double d) { return label_name(classify(d)); }, py::arg("d"));

    py::class_<MomentSummary>(m, "MomentSummary")
        .def_readonly("n", &MomentSummary::n)
        .def_readonly("mean_daa", &MomentSummary::mean_daa)
        .def_readonly("mean_dab", &MomentSummary::mean_dab)
        .def_readonly("mean_d", &MomentSummary::mean_d)
        .def_readonly("var_daa", &MomentSummary::var_daa)
        .def_readonly("var_dab", &MomentSummary::var_dab)
        .def_readonly("var_sum", &MomentSummary::var_sum)
        .def_readonly("var_d", &MomentSummary::var_d)
        .def_readonly("se_mean_d", &MomentSummary::se_mean_d);

    m.def(
        "moment_summary",
        [](const std::vector<double> &d_aa, const std::vector<double> &d_ab) {
            if (d_aa.size() != d_ab.size())
                throw InputError("d_aa and d_ab must have equal length");
            std::vector<DecisionSample> s;
            s.reserve(d_aa.size());
            for (std::size_t i = 0; i < d_aa.size(); ++i)
                s.push_back(DecisionSample::from_distances(d_aa[i], d_ab[i]));
            return moment_summary(s);
        },
        py::arg("d_aa"), py::arg("d_ab"));

    py::class_<RateEstimate>(m, "RateEstimate")
        .def_readonly("n", &RateEstimate::n)
        .def_readonly("errors", &RateEstimate::errors)
        .def_readonly("rate", &RateEstimate::rate)
        .def_readonly("ci_lo", &RateEstimate::ci_lo)
        .def_readonly("ci_hi", &RateEstimate::ci_hi);

    m.def("wilson_interval", &wilson_interval, py::arg("errors"), py::arg("n"), py::arg("z") = 1.959963984540054);
    m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
    m.def("gaussian_accuracy", &gaussian_accuracy, py::arg("mean_d"), py::arg("var_d"));

    // Spectral transforms take the eigenvalues directly.
    m.def("eigenvalues", [](const Eigen::MatrixXd &S) { return esd_eigenvalues(S).eigenvalues; }, py::arg("S"));
    m.def("singular_values", [](const Eigen::MatrixXd &A) { return singular_values(A).eigenvalues; }, py::arg("A"));
    m.def(
        "cauchy_transform", [](const std::vector<double> &ev, double z) { return cauchy_transform(spectrum(ev), z); },
        py::arg("eigenvalues"), py::arg("z"));
    m.def(
        "cauchy_inverse", [](const std::vector<double> &ev, double w) { return cauchy_inverse(spectrum(ev), w); },
        py::arg("eigenvalues"), py::arg("w"));
    m.def(
        "r_transform", [](const std::vector<double> &ev, double w) { return r_transform(spectrum(ev), w); },
        py::arg("eigenvalues"), py::arg("w"));
    m.def(
        "free_fourier_prediction",
        [](const std::vector<double> &ev, double theta, double c) { return free_fourier_prediction(spectrum(ev), theta, c); },
        py::arg("eigenvalues"), py::arg("theta"), py::arg("c") = 1.0);
    m.def(
        "spectral_law_ks",
        [](const std::vector<double> &values, const std::string &law) {
            return spectral_law_ks(spectrum(values), parse_spectral_law(law));
        },
        py::arg("values"), py::arg("law"));

    m.def(
        "spherical_integral_mc",
        [](const Eigen::MatrixXd &B, double theta, double c, long samples, std::uint64_t seed, int workers) {
            SphericalIntegralSpec spec;
            spec.B = B;
            spec.theta = theta;
            spec.c = c;
            spec.samples = samples;
            RateEstimateSE r;
            {
                py::gil_scoped_release release;
                r = spherical_integral_mc(spec, SeedStream(seed), workers);
            }
            return py::make_tuple(r.rate, r.se);
        },
        py::arg("B"), py::arg("theta"), py::arg("c") = 1.0, py::arg("samples") = 20000, py::arg("seed") = 1,
        py::arg("workers") = 1, "Monte Carlo rate (1/N) log E exp(-c theta N u^T B u) and its standard error.");
    m.def(
        "spherical_integral_exact_n2",
        [](const Eigen::MatrixXd &B, double theta, double c) {
            if (B.rows() != 2 || B.cols() != 2)
                throw InputError("spherical_integral_exact_n2: B must be 2 x 2");
            return spherical_integral_exact_n2(Eigen::Matrix2d(B), theta, c);
        },
        py::arg("B"), py::arg("theta"), py::arg("c") = 1.0);

    m.def(
        "run_experiment",
        [](const std::string &kind, const std::string &out, std::optional<std::vector<long>> M,
           std::optional<std::vector<long>> N, std::optional<std::vector<double>> alpha,
           std::optional<std::vector<double>> sigma2, std::optional<long> trials, std::uint64_t seed, double tol,
           long max_iter, bool per_trial, bool balanced, int workers, std::optional<std::vector<double>> ctheta,
           std::optional<std::string> ensemble, std::optional<long> samples) {
            ExperimentConfig c;
            c.kind = parse_experiment(kind);
            if (M)
                c.M = *M;
            if (N)
                c.N = *N;
            if (alpha)
                c.alpha = *alpha;
            if (sigma2)
                c.sigma2 = *sigma2;
            if (trials)
                c.trials = *trials;
            if (ctheta)
                c.ctheta = *ctheta;
            if (ensemble)
                c.ensemble = parse_ensemble(*ensemble);
            c.master_seed = seed;
            c.tol = tol;
            c.max_iter = max_iter;
            c.per_trial = per_trial;
            c.balanced = balanced;
            c.workers = workers;
            c.out_dir = out;
            c.apply_defaults();
            if (samples)
                c.samples = *samples;
            RunOutput r;
            {
                py::gil_scoped_release release;
                r = run_experiment(c);
            }
            py::dict d;
            d["files"] = r.files;
            d["warnings"] = r.warnings;
            d["flagged"] = r.flagged;
            return d;
        },
        py::arg("kind"), py::arg("out"), py::kw_only(), py::arg("M") = py::none(), py::arg("N") = py::none(),
        py::arg("alpha") = py::none(), py::arg("sigma2") = py::none(), py::arg("trials") = py::none(),
        py::arg("seed") = 1, py::arg("tol") = 1e-6, py::arg("max_iter") = 0, py::arg("per_trial") = false,
        py::arg("balanced") = false, py::arg("workers") = 1, py::arg("ctheta") = py::none(),
        py::arg("ensemble") = py::none(), py::arg("samples") = py::none(),
        "Runs an experiment into directory `out`; unset grid fields take the experiment defaults.");

    m.def(
        "reference_table",
        [](const std::string &source) {
            const auto t = load_reference(parse_reference_source(source));
            py::list rows;
            for (const auto &r : t.rows)
                rows.append(py::dict(py::arg("x") = r.x, py::arg("M") = r.M, py::arg("alpha") = r.alpha,
                                     py::arg("value") = r.value, py::arg("provenance") = r.provenance));
            return rows;
        },
        py::arg("source"));

    m.def(
        "compare",
        [](const std::string &results, const std::string &reference, double rtol, double atol) {
            const auto source = parse_reference_source(reference);
            const auto points = read_results(results, reference_metric(source));
            const auto report = compare_reference(points, load_reference(source), rtol, atol);
            py::dict d;
            d["pass"] = report.pass();
            d["flagged"] = report.flagged_count();
            d["gaps"] = long(report.gaps.size());
            d["rows"] = long(report.rows.size());
            d["csv"] = report.to_csv();
            return d;
        },
        py::arg("results"), py::arg("reference"), py::arg("rtol") = 0.02, py::arg("atol") = 0.0);
}
