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

#include "nchc/classifier.hpp"
#include "nchc/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nchc
{

DecisionSample DecisionSample::from_distances(double d_aa, double d_ab)
{
    DecisionSample s;
    s.d_aa = d_aa;
    s.d_ab = d_ab;
    s.d = d_aa - d_ab;
    s.label = classify(s.d);
    return s;
}

Label classify(double d)
{
    return d < 0.0 ? Label::a : Label::b;
}

Label classify(const DecisionSample &sample)
{
    return classify(sample.d);
}

DecisionSample decision_sample(const Eigen::VectorXd &y0, const HullSolver &hull_a, const HullSolver &hull_b,
                               const SolverOptions &options)
{
    if (hull_a.dim() != y0.size() || hull_b.dim() != y0.size())
        throw InputError("decision sample: hull dimension does not match the test point");
    if (!y0.allFinite())
        throw InputError("decision sample: non-finite test point");
    const HullProjection pa = hull_a.project(y0, options);
    const HullProjection pb = hull_b.project(y0, options);
    DecisionSample s = DecisionSample::from_distances(pa.distance, pb.distance);
    s.gap_aa = pa.dual_gap;
    s.gap_ab = pb.dual_gap;
    s.flagged = !(pa.converged && pb.converged);
    return s;
}

DecisionSample decision_sample(const Eigen::VectorXd &y0, const TrainingSet &train_a, const TrainingSet &train_b,
                               const SolverOptions &options)
{
    if (!train_a.Y.allFinite() || !train_b.Y.allFinite())
        throw InputError("decision sample: non-finite training block");
    return decision_sample(y0, HullSolver(train_a.Y), HullSolver(train_b.Y), options);
}

MomentSummary moment_summary(std::span<const DecisionSample> samples)
{
    const std::size_t n = samples.size();
    if (n < 2)
        throw InputError("moment summary: need at least two samples");

    MomentSummary m;
    m.n = long(n);
    for (const auto &s : samples)
    {
        m.mean_daa += s.d_aa;
        m.mean_dab += s.d_ab;
        m.mean_d += s.d;
    }
    m.mean_daa /= double(n);
    m.mean_dab /= double(n);
    m.mean_d /= double(n);

    const double mean_sum = m.mean_daa + m.mean_dab;
    for (const auto &s : samples)
    {
        const double ea = s.d_aa - m.mean_daa;
        const double eb = s.d_ab - m.mean_dab;
        const double es = (s.d_aa + s.d_ab) - mean_sum;
        const double ed = s.d - m.mean_d;
        m.var_daa += ea * ea;
        m.var_dab += eb * eb;
        m.var_sum += es * es;
        m.var_d += ed * ed;
    }
    const double denom = double(n - 1);
    m.var_daa /= denom;
    m.var_dab /= denom;
    m.var_sum /= denom;
    m.var_d /= denom;
    m.se_mean_d = std::sqrt(m.var_d / double(n));
    return m;
}

double std_normal_cdf(double x)
{
    if (std::isnan(x))
        throw InputError("std_normal_cdf: NaN argument");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double gaussian_accuracy(double mean_d, double var_d)
{
    if (!(var_d > 0.0) || !std::isfinite(var_d))
        throw InputError("gaussian_accuracy: variance must be positive and finite");
    if (!std::isfinite(mean_d))
        throw InputError("gaussian_accuracy: non-finite mean");
    return std_normal_cdf(-mean_d / std::sqrt(var_d));
}

RateEstimate wilson_interval(long errors, long n, double z)
{
    if (n < 1 || errors < 0 || errors > n)
        throw InputError("wilson_interval: need 0 <= errors <= n and n >= 1");
    RateEstimate r;
    r.n = n;
    r.errors = errors;
    const double nn = double(n);
    const double p = double(errors) / nn;
    r.rate = p;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
    const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    r.ci_lo = errors == 0 ? 0.0 : std::max(0.0, centre - half);
    r.ci_hi = errors == n ? 1.0 : std::min(1.0, centre + half);
    return r;
}

RateEstimate empirical_misclassification(std::span<const DecisionSample> samples)
{
    if (samples.empty())
        throw InputError("empirical_misclassification: no samples");
    const long errors = long(std::count_if(samples.begin(), samples.end(),
                                           [](const DecisionSample &s) { return s.label == Label::b; }));
    return wilson_interval(errors, long(samples.size()));
}

} // namespace nchc
