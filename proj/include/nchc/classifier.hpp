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

#ifndef NCHC_CLASSIFIER_HPP
#define NCHC_CLASSIFIER_HPP

#include "nchc/hull.hpp"
#include "nchc/model.hpp"

#include <span>

namespace nchc
{

// Outcome of classifying one test point against hulls a and b.
//   d_aa: squared distance to hull a, d_ab: to hull b, d = d_aa - d_ab.
// Both distances are upper bounds within their dual gap of the optimum, so the
// true d lies in [d - gap_aa, d + gap_ab].
struct DecisionSample
{
    double d_aa = 0.0;
    double d_ab = 0.0;
    double d = 0.0;
    Label label = Label::b;
    double gap_aa = 0.0;
    double gap_ab = 0.0;
    bool flagged = false;   // at least one solve did not converge

    static DecisionSample from_distances(double d_aa, double d_ab);
};

DecisionSample decision_sample(const Eigen::VectorXd &y0, const HullSolver &hull_a, const HullSolver &hull_b,
                               const SolverOptions &options);
DecisionSample decision_sample(const Eigen::VectorXd &y0, const TrainingSet &train_a, const TrainingSet &train_b,
                               const SolverOptions &options);

// a iff d < 0; a tie goes to b.
Label classify(const DecisionSample &sample);
Label classify(double d);

// Unbiased sample moments of the decision metric and its parts. var_sum is the
// variance of d_aa + d_ab, so var_d == 2 var_daa + 2 var_dab - var_sum.
struct MomentSummary
{
    long n = 0;
    double mean_daa = 0.0;
    double mean_dab = 0.0;
    double mean_d = 0.0;
    double var_daa = 0.0;
    double var_dab = 0.0;
    double var_sum = 0.0;
    double var_d = 0.0;
    double se_mean_d = 0.0;
};

MomentSummary moment_summary(std::span<const DecisionSample> samples);

// Phi(x) = erfc(-x / sqrt 2) / 2.
double std_normal_cdf(double x);

// Mass of N(mean_d, var_d) below zero, i.e. the predicted probability of
// deciding a.
double gaussian_accuracy(double mean_d, double var_d);

struct RateEstimate
{
    long n = 0;
    long errors = 0;
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Wilson score interval; z = 1.959963984540054 for 95 %.
RateEstimate wilson_interval(long errors, long n, double z = 1.959963984540054);

// Fraction of samples (all with true label a) decided as b.
RateEstimate empirical_misclassification(std::span<const DecisionSample> samples);

} // namespace nchc

#endif
