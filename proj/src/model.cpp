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

#include "nchc/model.hpp"
#include "nchc/error.hpp"

#include <cmath>
#include <string>

namespace nchc
{

std::string_view to_string(Label l)
{
    return l == Label::a ? "a" : "b";
}

void ModelParams::validate() const
{
    if (M < 1 || N < 1)
        throw InputError("model: M and N must be >= 1 (got M=" + std::to_string(M) + ", N=" + std::to_string(N) +
                         ")");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw InputError("model: sigma2 must be finite and >= 0");
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, RandomSource &rng)
{
    Eigen::MatrixXd m(rows, cols);
    rng.fill_normal(std::span<double>(m.data(), std::size_t(m.size())));
    return m;
}

TrainingSet make_training_set(const ModelParams &params, const SeedStream &stream)
{
    params.validate();
    RandomSource rng(stream);
    TrainingSet ts;
    ts.H = gaussian_matrix(params.M, params.M, rng);
    ts.X = gaussian_matrix(params.M, params.N, rng);
    ts.noise = gaussian_matrix(params.M, params.N, rng);
    ts.Y.noalias() = (1.0 / std::sqrt(double(params.M))) * (ts.H * ts.X);
    if (params.sigma2 > 0.0)
        ts.Y += params.sigma() * ts.noise;
    return ts;
}

TestPoint make_test_point(const Eigen::MatrixXd &H, double sigma2, Label label, const SeedStream &stream)
{
    if (H.rows() < 1 || H.rows() != H.cols())
        throw InputError("test point: H must be square and non-empty");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw InputError("test point: sigma2 must be finite and >= 0");
    const Eigen::Index M = H.rows();
    RandomSource rng(stream);
    TestPoint tp;
    tp.true_label = label;
    tp.x0 = gaussian_matrix(M, 1, rng);
    tp.n0 = gaussian_matrix(M, 1, rng);
    tp.y0.noalias() = (1.0 / std::sqrt(double(M))) * (H * tp.x0);
    if (sigma2 > 0.0)
        tp.y0 += std::sqrt(sigma2) * tp.n0;
    return tp;
}

Eigen::MatrixXd test_covariance(const Eigen::MatrixXd &H, double sigma2)
{
    if (H.rows() != H.cols())
        throw InputError("test covariance: H must be square");
    const Eigen::Index M = H.rows();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(M, M);
    C.selfadjointView<Eigen::Lower>().rankUpdate(H, 1.0 / double(M));
    C.triangularView<Eigen::StrictlyUpper>() = C.transpose();
    C.diagonal().array() += sigma2;
    return C;
}

double norm_concentration_stat(const Eigen::MatrixXd &X)
{
    if (X.size() == 0)
        throw InputError("norm concentration: empty matrix");
    const double inv_m = 1.0 / double(X.rows());
    return (X.colwise().squaredNorm().array() * inv_m - 1.0).abs().maxCoeff();
}

} // namespace nchc
