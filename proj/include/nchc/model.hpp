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

#ifndef NCHC_MODEL_HPP
#define NCHC_MODEL_HPP

#include "nchc/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string_view>

namespace nchc
{

enum class Label
{
    a,
    b
};

std::string_view to_string(Label l);

// M antennas, N training transmissions, noise power sigma2.
struct ModelParams
{
    long M = 0;
    long N = 0;
    double sigma2 = 0.0;

    ModelParams() = default;
    ModelParams(long m, long n, double s2) : M(m), N(n), sigma2(s2) { validate(); }

    double alpha() const { return double(M) / double(N); }
    double sigma() const { return std::sqrt(sigma2); }
    void validate() const;
};

// One user's training block, Y = H X / sqrt(M) + sigma * noise.
struct TrainingSet
{
    Eigen::MatrixXd H;       // M x M channel
    Eigen::MatrixXd X;       // M x N transmit block
    Eigen::MatrixXd noise;   // M x N
    Eigen::MatrixXd Y;       // M x N received block
};

struct TestPoint
{
    Eigen::VectorXd y0;
    Label true_label = Label::a;
    Eigen::VectorXd x0;
    Eigen::VectorXd n0;
};

// Draws H, X and noise (each column-major, in that order) from the stream.
TrainingSet make_training_set(const ModelParams &params, const SeedStream &stream);

// y0 = H x0 / sqrt(M) + sigma n0 with fresh x0 then n0 from the stream.
TestPoint make_test_point(const Eigen::MatrixXd &H, double sigma2, Label label, const SeedStream &stream);

// Covariance of the test point given the channel: sigma2 I + H H^T / M.
Eigen::MatrixXd test_covariance(const Eigen::MatrixXd &H, double sigma2);

// max_i |(1/M) ||x_i||^2 - 1| over the columns of X.
double norm_concentration_stat(const Eigen::MatrixXd &X);

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RandomSource &rng);

} // namespace nchc

#endif
