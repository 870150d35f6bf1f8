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

#include "nchc/freeprob.hpp"
#include "nchc/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace nchc
{

RateEstimateSE spherical_integral_mc(const SphericalIntegralSpec &spec, const SeedStream &stream, int workers)
{
    spec.validate();
    const long n_dim = long(spec.B.rows());
    const long n = spec.samples;
    const double scale = double(n_dim) * spec.c * spec.theta;
    const long blocks = (n + kSphericalBlock - 1) / kSphericalBlock;

    // exponent[i] = -N c theta u_i^T B u_i
    std::vector<double> exponent(std::size_t(n), 0.0);
    parallel_for(blocks, workers, [&](long blk) {
        RandomSource rng(stream.child(std::uint64_t(blk)));
        Eigen::VectorXd g(n_dim);
        Eigen::VectorXd Bg(n_dim);
        const long begin = blk * kSphericalBlock;
        const long end = std::min(n, begin + kSphericalBlock);
        for (long i = begin; i < end; ++i)
        {
            rng.fill_normal(std::span<double>(g.data(), std::size_t(n_dim)));
            Bg.noalias() = spec.B * g;
            exponent[std::size_t(i)] = -scale * (g.dot(Bg) / g.dot(g));
        }
    });

    const double shift = *std::max_element(exponent.begin(), exponent.end());
    std::vector<double> weight(exponent.size());
    double total = 0.0;
    for (std::size_t i = 0; i < exponent.size(); ++i)
    {
        weight[i] = std::exp(exponent[i] - shift);
        total += weight[i];
    }
    const double nn = double(n);
    const double log_mean = shift + std::log(total / nn);

    // Jackknife over leave-one-out log-means.
    std::vector<double> loo(exponent.size());
    double loo_mean = 0.0;
    for (std::size_t i = 0; i < exponent.size(); ++i)
    {
        double rest = total - weight[i];
        if (rest < 1e-8 * total)
        {
            rest = 0.0;
            for (std::size_t j = 0; j < exponent.size(); ++j)
                if (j != i)
                    rest += weight[j];
        }
        loo[i] = shift + std::log(rest / (nn - 1.0));
        loo_mean += loo[i];
    }
    loo_mean /= nn;
    double ss = 0.0;
    for (double l : loo)
        ss += (l - loo_mean) * (l - loo_mean);

    RateEstimateSE out;
    out.rate = log_mean / double(n_dim);
    out.se = std::sqrt((nn - 1.0) / nn * ss) / double(n_dim);
    return out;
}

} // namespace nchc
