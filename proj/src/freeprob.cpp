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
#include "nchc/error.hpp"
#include "nchc/model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace nchc
{

namespace
{
constexpr double kSeriesThreshold = 1e-6;
constexpr int kMaxRootIterations = 300;

double mean_inverse(const std::vector<double> &lambda, double z)
{
    double s = 0.0;
    for (double l : lambda)
        s += 1.0 / (z - l);
    return s / double(lambda.size());
}

double mean_inverse_sq(const std::vector<double> &lambda, double z)
{
    double s = 0.0;
    for (double l : lambda)
    {
        const double t = 1.0 / (z - l);
        s += t * t;
    }
    return s / double(lambda.size());
}
} // namespace

SpectralSample SpectralSample::from_values(std::vector<double> values)
{
    std::sort(values.begin(), values.end());
    SpectralSample s;
    s.dim = long(values.size());
    s.eigenvalues = std::move(values);
    s.validate();
    return s;
}

void SpectralSample::validate() const
{
    if (dim < 1 || long(eigenvalues.size()) != dim)
        throw InputError("spectral sample: dimension mismatch or empty spectrum");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    {
        if (!std::isfinite(eigenvalues[i]))
            throw InputError("spectral sample: non-finite eigenvalue");
        if (i > 0 && eigenvalues[i] < eigenvalues[i - 1])
            throw InputError("spectral sample: eigenvalues not sorted");
    }
}

double SpectralSample::moment(int k) const
{
    double s = 0.0;
    for (double l : eigenvalues)
        s += std::pow(l, k);
    return s / double(dim);
}

SpectralSample esd_eigenvalues(const Eigen::MatrixXd &S)
{
    if (S.rows() < 1 || S.rows() != S.cols())
        throw InputError("esd: matrix must be square and non-empty");
    if (!S.allFinite())
        throw InputError("esd: non-finite entries");
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw InputError("esd: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw InputError("esd: eigensolver did not converge");
    const Eigen::VectorXd &ev = es.eigenvalues();
    return SpectralSample::from_values(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

SpectralSample singular_values(const Eigen::MatrixXd &A)
{
    Eigen::MatrixXd AtA = Eigen::MatrixXd::Zero(A.cols(), A.cols());
    AtA.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose());
    AtA.triangularView<Eigen::StrictlyUpper>() = AtA.transpose();
    SpectralSample s = esd_eigenvalues(AtA);
    for (double &l : s.eigenvalues)
        l = std::sqrt(std::max(l, 0.0));
    return s;
}

double cauchy_transform(const SpectralSample &spec, double z)
{
    if (!std::isfinite(z))
        throw DomainError("cauchy transform: non-finite argument");
    if (z >= spec.min() && z <= spec.max())
        throw DomainError("cauchy transform: z=" + std::to_string(z) + " lies inside the spectrum [" +
                          std::to_string(spec.min()) + ", " + std::to_string(spec.max()) + "]");
    return mean_inverse(spec.eigenvalues, z);
}

double cauchy_inverse(const SpectralSample &spec, double w)
{
    if (!(w < 0.0) || !std::isfinite(w))
        throw DomainError("cauchy inverse: argument must be negative and finite");
    const double lmin = spec.min();
    const double lmax = spec.max();
    // lmin + 1/w <= root <= lmax + 1/w, and the root is below lmin where
    // G(lmin - delta) <= -1/(dim delta) < w for delta = 1/(2 dim |w|).
    double lo = lmin + 1.0 / w;
    double hi = std::min(lmax + 1.0 / w, lmin - 0.5 / (double(spec.dim) * -w));
    if (!(lo <= hi))
        throw DomainError("cauchy inverse: no root bracket for w=" + std::to_string(w));
    if (lo == hi)
        return lo;

    const double target_res = 1e-14 * std::max(1.0, -w);
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < kMaxRootIterations; ++it)
    {
        const double g = mean_inverse(spec.eigenvalues, z) - w;
        if (std::abs(g) <= target_res)
            return z;
        // G is decreasing: g > 0 means the root lies to the right.
        if (g > 0.0)
            lo = z;
        else
            hi = z;
        const double dg = -mean_inverse_sq(spec.eigenvalues, z);
        double next = z - g / dg;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == z || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z))
            return next;
        z = next;
    }
    return z;
}

double r_transform(const SpectralSample &spec, double w)
{
    if (!(w < 0.0) || !std::isfinite(w))
        throw DomainError("r transform: argument must be negative and finite (got " + std::to_string(w) + ")");
    if (-w < kSeriesThreshold)
    {
        const double m1 = spec.moment(1);
        double c2 = 0.0, c3 = 0.0;
        for (double l : spec.eigenvalues)
        {
            const double e = l - m1;
            c2 += e * e;
            c3 += e * e * e;
        }
        c2 /= double(spec.dim);
        c3 /= double(spec.dim);
        return m1 + c2 * w + c3 * w * w;
    }
    return cauchy_inverse(spec, w) - 1.0 / w;
}

double free_fourier_prediction(const SpectralSample &spec_b, double theta, double c)
{
    if (!(theta > 0.0) || !(c > 0.0) || !std::isfinite(theta) || !std::isfinite(c))
        throw InputError("free fourier prediction: theta and c must be positive and finite");
    const double ct = c * theta;
    auto integrand = [&](double w) { return r_transform(spec_b, -2.0 * ct * w); };
    double err = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-12, &err);
    return -ct * integral;
}

void SphericalIntegralSpec::validate() const
{
    const long n = long(B.rows());
    if (n < 2 || B.cols() != n)
        throw InputError("spherical integral: B must be square with N >= 2");
    if (n > kSphericalMaxDim)
        throw InputError("spherical integral: N must be <= " + std::to_string(kSphericalMaxDim));
    if (!B.allFinite())
        throw InputError("spherical integral: non-finite B");
    if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff()))
        throw InputError("spherical integral: B is not symmetric");
    if (!(theta > 0.0) || !(c > 0.0))
        throw InputError("spherical integral: theta and c must be positive");
    if (samples < kSphericalMinSamples)
        throw InputError("spherical integral: need at least " + std::to_string(kSphericalMinSamples) + " samples");
}

double spherical_integral_exact_n2(const Eigen::Matrix2d &B, double theta, double c)
{
    if (!(theta > 0.0) || !(c > 0.0))
        throw InputError("spherical integral n2: theta and c must be positive");
    if (std::abs(B(0, 1) - B(1, 0)) > 1e-12 * std::max(1.0, B.cwiseAbs().maxCoeff()))
        throw InputError("spherical integral n2: B is not symmetric");
    const double ct = c * theta;
    auto q = [&](double phi) {
        const double cs = std::cos(phi), sn = std::sin(phi);
        return B(0, 0) * cs * cs + 2.0 * B(0, 1) * cs * sn + B(1, 1) * sn * sn;
    };
    // q(phi) >= lambda_min(B); shifting by it keeps the integrand in (0, 1].
    const double qmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(B, Eigen::EigenvaluesOnly).eigenvalues()[0];
    auto f = [&](double phi) { return std::exp(-2.0 * ct * (q(phi) - qmin)); };
    double err = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0 * std::numbers::pi, 15, 1e-13, &err);
    return 0.5 * (-2.0 * ct * qmin + std::log(integral / (2.0 * std::numbers::pi)));
}

SpectralLaw parse_spectral_law(std::string_view name)
{
    if (name == "quarter_circle_singular")
        return SpectralLaw::quarter_circle_singular;
    if (name == "mp_unit_ratio_eigen")
        return SpectralLaw::mp_unit_ratio_eigen;
    throw InputError("unknown spectral law '" + std::string(name) + "'");
}

std::string_view to_string(SpectralLaw law)
{
    return law == SpectralLaw::quarter_circle_singular ? "quarter_circle_singular" : "mp_unit_ratio_eigen";
}

double quarter_circle_density(double s)
{
    if (s < 0.0 || s >= 2.0)
        return 0.0;
    return std::sqrt(4.0 - s * s) / std::numbers::pi;
}

double quarter_circle_cdf(double s)
{
    if (s <= 0.0)
        return 0.0;
    if (s >= 2.0)
        return 1.0;
    return (0.5 * s * std::sqrt(4.0 - s * s) + 2.0 * std::asin(0.5 * s)) / std::numbers::pi;
}

double mp_unit_ratio_density(double x)
{
    if (x <= 0.0 || x >= 4.0)
        return 0.0;
    return std::sqrt((4.0 - x) / x) / (2.0 * std::numbers::pi);
}

// Eigenvalues of H H^T / M are squared singular values of H / sqrt(M).
double mp_unit_ratio_cdf(double x)
{
    return x <= 0.0 ? 0.0 : quarter_circle_cdf(std::sqrt(x));
}

double spectral_law_ks(const SpectralSample &spec, SpectralLaw law)
{
    spec.validate();
    const double n = double(spec.dim);
    double ks = 0.0;
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
    {
        const double x = spec.eigenvalues[i];
        const double F = law == SpectralLaw::quarter_circle_singular ? quarter_circle_cdf(x) : mp_unit_ratio_cdf(x);
        ks = std::max({ks, double(i + 1) / n - F, F - double(i) / n});
    }
    return ks;
}

Eigen::MatrixXd wigner_matrix(long n, RandomSource &rng)
{
    const Eigen::MatrixXd A = gaussian_matrix(n, n, rng);
    return (A + A.transpose()) / std::sqrt(2.0 * double(n));
}

Eigen::MatrixXd wishart_unit_ratio(long n, RandomSource &rng)
{
    const Eigen::MatrixXd H = gaussian_matrix(n, n, rng);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    W.selfadjointView<Eigen::Lower>().rankUpdate(H, 1.0 / double(n));
    W.triangularView<Eigen::StrictlyUpper>() = W.transpose();
    return W;
}

Eigen::MatrixXd haar_orthogonal(long n, RandomSource &rng)
{
    const Eigen::MatrixXd A = gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (long j = 0; j < n; ++j)
        if (R(j, j) < 0.0)
            Q.col(j) = -Q.col(j);
    return Q;
}

} // namespace nchc
