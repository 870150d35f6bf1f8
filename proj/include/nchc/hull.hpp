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

#ifndef NCHC_HULL_HPP
#define NCHC_HULL_HPP

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace nchc
{

struct SolverOptions
{
    double tol = 1e-6;   // relative dual-gap threshold: gap <= tol * (1 + distance)
    long max_iter = 0;   // 0 selects 50 * N
    bool record_trace = false;
    // Exact solve on the active face once the support has been stable for a
    // while (at most this many vertices; 0 disables).
    long face_solve_max_support = 64;

    long effective_max_iter(long n) const { return max_iter > 0 ? max_iter : 50 * n; }
};

// Squared Euclidean distance from y0 to conv{columns of Y}.
struct HullProblem
{
    Eigen::VectorXd y0;
    Eigen::MatrixXd Y;
    double tol = 1e-6;
    long max_iter = 0;
    std::optional<Eigen::VectorXd> warm_start;

    // Throws InputError on empty, mismatched or non-finite data, or tol <= 0.
    void validate() const;
};

struct HullProjection
{
    Eigen::VectorXd v;       // simplex weights
    double distance = 0.0;   // ||y0 - Y v||^2
    double dual_gap = 0.0;   // certifies distance - optimum in [0, dual_gap]
    long iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;   // filled only when requested
};

// Precomputes the Gram matrix of one hull so that many test points can be
// projected in O(N) per iteration. Y must outlive the solver.
class HullSolver
{
public:
    explicit HullSolver(const Eigen::MatrixXd &Y);

    Eigen::Index dim() const { return Y_.rows(); }
    Eigen::Index vertices() const { return Y_.cols(); }
    const Eigen::MatrixXd &gram() const { return gram_; }

    // Away-step Frank-Wolfe with exact line search. Starts from warm_start if
    // given (must lie on the simplex), otherwise from the barycenter.
    HullProjection project(const Eigen::VectorXd &y0, const SolverOptions &options,
                           const std::optional<Eigen::VectorXd> &warm_start = std::nullopt) const;

private:
    const Eigen::MatrixXd &Y_;
    Eigen::MatrixXd gram_;
};

HullProjection project_onto_hull(const HullProblem &problem);

// Frank-Wolfe gap max_s grad f(v)^T (v - s) over simplex vertices s, for
// f(v) = ||y0 - Y v||^2. Upper-bounds f(v) - min f.
double fw_dual_gap(const HullProblem &problem, const Eigen::VectorXd &v);

// Exact minimiser by enumerating every support subset (N <= 12).
HullProjection reference_distance_small(const HullProblem &problem);

inline constexpr long kReferenceMaxVertices = 12;

} // namespace nchc

#endif
