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

#ifndef NCHC_FREEPROB_HPP
#define NCHC_FREEPROB_HPP

#include "nchc/rng.hpp"

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace nchc
{

// Ascending eigenvalues of a symmetric matrix (or any finite real spectrum).
struct SpectralSample
{
    std::vector<double> eigenvalues;
    long dim = 0;

    static SpectralSample from_values(std::vector<double> values);
    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
    double moment(int k) const;
    void validate() const;
};

// Dense symmetric eigensolver. Throws InputError when S deviates from symmetry
// by more than 1e-8 * max(1, max|S_ij|).
SpectralSample esd_eigenvalues(const Eigen::MatrixXd &S);

// Singular values of A, via the eigenvalues of A^T A.
SpectralSample singular_values(const Eigen::MatrixXd &A);

// G(z) = (1/dim) sum 1 / (z - lambda_i), for z outside [min, max].
double cauchy_transform(const SpectralSample &spec, double z);

// The unique z < min(spectrum) with G(z) = w, for w < 0.
double cauchy_inverse(const SpectralSample &spec, double w);

// R(w) = G^{-1}(w) - 1/w for w < 0. Near w = 0 the free-cumulant series
// k1 + k2 w + k3 w^2 is used to avoid cancellation between the two terms.
double r_transform(const SpectralSample &spec, double w);

// Predicted rate (1/N) log E_u exp(-N c theta u^T B u) = -c theta int_0^1 R_B(-2 c theta w) dw.
double free_fourier_prediction(const SpectralSample &spec_b, double theta, double c);

struct SphericalIntegralSpec
{
    Eigen::MatrixXd B;
    double theta = 0.0;
    double c = 1.0;
    long samples = 10000;

    void validate() const;
};

struct RateEstimateSE
{
    double rate = 0.0;
    double se = 0.0;
};

inline constexpr long kSphericalMaxDim = 512;
inline constexpr long kSphericalMinSamples = 1000;
inline constexpr long kSphericalBlock = 1024;

// Monte Carlo estimate of (1/N) log E_u[exp(-N c theta u^T B u)] with u uniform
// on the unit sphere (normalised Gaussian). Samples are drawn in blocks of
// kSphericalBlock, block k from stream.child(k), so the result does not depend
// on the worker count. The standard error is the jackknife SE of the rate.
RateEstimateSE spherical_integral_mc(const SphericalIntegralSpec &spec, const SeedStream &stream, int workers = 1);

// Quadrature value of the same rate for a 2x2 B, over u = (cos phi, sin phi).
double spherical_integral_exact_n2(const Eigen::Matrix2d &B, double theta, double c);

enum class SpectralLaw
{
    quarter_circle_singular,   // singular values of H / sqrt(M), density sqrt(4 - s^2) / pi on [0, 2]
    mp_unit_ratio_eigen        // eigenvalues of H H^T / M, density sqrt((4 - x) / x) / (2 pi) on [0, 4]
};

SpectralLaw parse_spectral_law(std::string_view name);
std::string_view to_string(SpectralLaw law);

double quarter_circle_cdf(double s);
double quarter_circle_density(double s);
double mp_unit_ratio_cdf(double x);
double mp_unit_ratio_density(double x);

// Kolmogorov-Smirnov distance between the empirical CDF and the limiting law.
double spectral_law_ks(const SpectralSample &spec, SpectralLaw law);

// Random ensembles used by the verification runs.
Eigen::MatrixXd wigner_matrix(long n, RandomSource &rng);           // semicircle on [-2, 2]
Eigen::MatrixXd wishart_unit_ratio(long n, RandomSource &rng);      // H H^T / n, MP ratio 1
Eigen::MatrixXd haar_orthogonal(long n, RandomSource &rng);

} // namespace nchc

#endif
