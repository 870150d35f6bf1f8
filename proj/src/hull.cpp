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

#include "nchc/hull.hpp"
#include "nchc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nchc
{

namespace
{

void check_simplex(const Eigen::VectorXd &v, Eigen::Index n, const char *what)
{
    if (v.size() != n)
        throw InputError(std::string(what) + ": expected " + std::to_string(n) + " weights, got " +
                         std::to_string(v.size()));
    if (!v.allFinite())
        throw InputError(std::string(what) + ": non-finite weight");
    if (v.minCoeff() < -1e-12)
        throw InputError(std::string(what) + ": negative weight " + std::to_string(v.minCoeff()));
    if (std::abs(v.sum() - 1.0) > 1e-9)
        throw InputError(std::string(what) + ": weights sum to " + std::to_string(v.sum()));
}

// Clip tiny negatives and rescale onto the simplex.
Eigen::VectorXd renormalize(const Eigen::VectorXd &v)
{
    Eigen::VectorXd out = v.cwiseMax(0.0);
    const double s = out.sum();
    if (s > 0.0)
        out /= s;
    else
        out.setConstant(1.0 / double(v.size()));
    return out;
}

struct DirectEval
{
    double distance;
    double gap;
};

// Objective and Frank-Wolfe gap recomputed from Y, not from the Gram matrix.
DirectEval evaluate_direct(const Eigen::MatrixXd &Y, const Eigen::VectorXd &y0, const Eigen::VectorXd &v)
{
    const Eigen::VectorXd r = Y * v - y0;
    const Eigen::VectorXd grad = 2.0 * (Y.transpose() * r);
    const double gap = grad.dot(v) - grad.minCoeff();
    return {r.squaredNorm(), std::max(gap, 0.0)};
}

// Minimises the objective over the affine hull of the support of v, then moves
// v toward that minimiser until a weight would turn negative, drops that vertex
// and repeats (Wolfe's minor cycle). The objective never increases. Returns
// false if nothing changed.
bool face_solve(const Eigen::MatrixXd &G, const Eigen::VectorXd &b, Eigen::VectorXd &v)
{
    std::vector<Eigen::Index> S;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (v[i] > 0.0)
            S.push_back(i);

    bool changed = false;
    while (S.size() > 1)
    {
        const auto k = Eigen::Index(S.size());
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
        Eigen::VectorXd rhs(k + 1);
        Eigen::VectorXd vs(k);
        for (Eigen::Index i = 0; i < k; ++i)
        {
            for (Eigen::Index j = 0; j < k; ++j)
                K(i, j) = G(S[std::size_t(i)], S[std::size_t(j)]);
            K(i, k) = K(k, i) = 1.0;
            rhs[i] = b[S[std::size_t(i)]];
            vs[i] = v[S[std::size_t(i)]];
        }
        rhs[k] = 1.0;
        const Eigen::VectorXd z = K.completeOrthogonalDecomposition().solve(rhs).head(k);
        if (!z.allFinite() || std::abs(z.sum() - 1.0) > 1e-9)
            return changed;
        const Eigen::MatrixXd Gs = K.topLeftCorner(k, k);
        const Eigen::VectorXd bs = rhs.head(k);
        const double fz = z.dot(Gs * z) - 2.0 * bs.dot(z);
        const double fv = vs.dot(Gs * vs) - 2.0 * bs.dot(vs);
        if (!(fz < fv))
            return changed;

        double theta = 1.0;
        Eigen::Index hit = -1;
        for (Eigen::Index i = 0; i < k; ++i)
            if (z[i] < 0.0)
            {
                const double t = vs[i] / (vs[i] - z[i]);
                if (t < theta)
                {
                    theta = t;
                    hit = i;
                }
            }
        vs += theta * (z - vs);
        vs = vs.cwiseMax(0.0);
        if (hit >= 0)
            vs[hit] = 0.0;
        vs /= vs.sum();
        for (Eigen::Index i = 0; i < k; ++i)
            v[S[std::size_t(i)]] = vs[i];
        changed = true;
        if (hit < 0)
            break;
        S.erase(S.begin() + hit);
    }
    return changed;
}

} // namespace

void HullProblem::validate() const
{
    if (Y.rows() < 1 || Y.cols() < 1)
        throw InputError("hull problem: Y must have at least one row and one column");
    if (y0.size() != Y.rows())
        throw InputError("hull problem: y0 has length " + std::to_string(y0.size()) + " but Y has " +
                         std::to_string(Y.rows()) + " rows");
    if (!y0.allFinite() || !Y.allFinite())
        throw InputError("hull problem: non-finite input entries");
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw InputError("hull problem: tol must be a positive finite number");
    if (max_iter < 0)
        throw InputError("hull problem: max_iter must be positive");
    if (warm_start)
        check_simplex(*warm_start, Y.cols(), "warm start");
}

HullSolver::HullSolver(const Eigen::MatrixXd &Y) : Y_(Y)
{
    const Eigen::Index n = Y.cols();
    gram_ = Eigen::MatrixXd::Zero(n, n);
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(Y.transpose());
    gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
}

HullProjection HullSolver::project(const Eigen::VectorXd &y0, const SolverOptions &options,
                                   const std::optional<Eigen::VectorXd> &warm_start) const
{
    const Eigen::Index n = Y_.cols();
    const Eigen::MatrixXd &G = gram_;
    const Eigen::VectorXd b = Y_.transpose() * y0;
    const double c0 = y0.squaredNorm();
    const long max_iter = options.effective_max_iter(long(n));

    HullProjection out;
    Eigen::VectorXd v = warm_start ? renormalize(*warm_start) : Eigen::VectorXd::Constant(n, 1.0 / double(n));
    Eigen::VectorXd Gv = G * v;

    long it = 0;
    long stable = 0;   // iterations since the support last changed
    for (;;)
    {
        const double vGv = v.dot(Gv);
        const double f = std::max(c0 - 2.0 * b.dot(v) + vGv, 0.0);
        if (options.record_trace)
            out.objective_trace.push_back(f);

        // grad f = 2 (G v - b); work with half-gradients to save the factor.
        Eigen::Index s = 0, a = -1;
        double hg_s = std::numeric_limits<double>::infinity();
        double hg_a = -std::numeric_limits<double>::infinity();
        double hg_v = 0.0;
        long support = 0;
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double hg = Gv[i] - b[i];
            if (hg < hg_s)
            {
                hg_s = hg;
                s = i;
            }
            if (v[i] > 0.0)
            {
                ++support;
                hg_v += hg * v[i];
                if (hg > hg_a)
                {
                    hg_a = hg;
                    a = i;
                }
            }
        }
        const double fw_gap = 2.0 * (hg_v - hg_s);
        const double away_gap = 2.0 * (hg_a - hg_v);

        if (fw_gap <= options.tol * (1.0 + f))
        {
            const Eigen::VectorXd vn = renormalize(v);
            const DirectEval direct = evaluate_direct(Y_, y0, vn);
            if (direct.gap <= options.tol * (1.0 + direct.distance))
            {
                out.v = vn;
                out.distance = direct.distance;
                out.dual_gap = direct.gap;
                out.converged = true;
                break;
            }
            // Incremental state drifted; resynchronise before continuing.
            v = vn;
            Gv = G * v;
            if (it >= max_iter)
            {
                out.v = vn;
                out.distance = direct.distance;
                out.dual_gap = direct.gap;
                break;
            }
            continue;
        }
        if (it >= max_iter)
        {
            out.v = renormalize(v);
            const DirectEval direct = evaluate_direct(Y_, y0, out.v);
            out.distance = direct.distance;
            out.dual_gap = direct.gap;
            out.converged = direct.gap <= options.tol * (1.0 + direct.distance);
            break;
        }
        ++it;

        if (support > 1 && support <= options.face_solve_max_support && stable >= std::max(4L, support))
        {
            stable = 0;
            if (face_solve(G, b, v))
            {
                Gv.setZero();
                for (Eigen::Index i = 0; i < n; ++i)
                    if (v[i] > 0.0)
                        Gv += v[i] * G.col(i);
                continue;
            }
        }
        ++stable;

        // f(v + g d) = f(v) + g grad^T d + g^2 d^T G d
        if (fw_gap >= away_gap || a < 0)
        {
            // d = e_s - v
            const double slope = -fw_gap;
            const double curv = G(s, s) - 2.0 * Gv[s] + vGv;
            double step = curv > 0.0 ? std::min(-slope / (2.0 * curv), 1.0) : 1.0;
            step = std::max(step, 0.0);
            if (step > 0.0 && (v[s] == 0.0 || step == 1.0))
                stable = 0;
            v *= (1.0 - step);
            v[s] += step;
            Gv = (1.0 - step) * Gv + step * G.col(s);
        }
        else
        {
            // d = v - e_a, feasible up to v_a / (1 - v_a)
            const double va = v[a];
            const double max_step = va / (1.0 - va);
            const double slope = -away_gap;
            const double curv = vGv - 2.0 * Gv[a] + G(a, a);
            double step = curv > 0.0 ? std::min(-slope / (2.0 * curv), max_step) : max_step;
            step = std::max(step, 0.0);
            v *= (1.0 + step);
            v[a] -= step;
            if (step == max_step)
            {
                v[a] = 0.0;
                stable = 0;
            }
            Gv = (1.0 + step) * Gv - step * G.col(a);
        }
    }
    out.iterations = it;
    if (options.record_trace)
        out.objective_trace.push_back(out.distance);
    return out;
}

HullProjection project_onto_hull(const HullProblem &problem)
{
    problem.validate();
    HullSolver solver(problem.Y);
    SolverOptions opts;
    opts.tol = problem.tol;
    opts.max_iter = problem.max_iter;
    return solver.project(problem.y0, opts, problem.warm_start);
}

double fw_dual_gap(const HullProblem &problem, const Eigen::VectorXd &v)
{
    problem.validate();
    check_simplex(v, problem.Y.cols(), "fw_dual_gap");
    return evaluate_direct(problem.Y, problem.y0, v).gap;
}

HullProjection reference_distance_small(const HullProblem &problem)
{
    problem.validate();
    const Eigen::Index n_all = problem.Y.cols();
    if (n_all > kReferenceMaxVertices)
        throw SizeError("reference_distance_small: N=" + std::to_string(n_all) + " exceeds " +
                        std::to_string(kReferenceMaxVertices));

    // Exact duplicate columns are merged onto their first occurrence.
    std::vector<Eigen::Index> unique;
    for (Eigen::Index j = 0; j < n_all; ++j)
    {
        bool dup = false;
        for (Eigen::Index u : unique)
            if (problem.Y.col(j) == problem.Y.col(u))
            {
                dup = true;
                break;
            }
        if (!dup)
            unique.push_back(j);
    }
    const int n = int(unique.size());
    const Eigen::VectorXd &y0 = problem.y0;

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_v = Eigen::VectorXd::Zero(n_all);

    for (unsigned mask = 1; mask < (1u << n); ++mask)
    {
        std::vector<Eigen::Index> support;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j))
                support.push_back(unique[j]);
        const int k = int(support.size());

        // Affine parametrisation around the first support vertex:
        // w = e_0 + sum_j t_j (e_j - e_0).
        Eigen::VectorXd w(k);
        if (k == 1)
        {
            w[0] = 1.0;
        }
        else
        {
            const Eigen::VectorXd base = problem.Y.col(support[0]);
            Eigen::MatrixXd D(problem.Y.rows(), k - 1);
            for (int j = 1; j < k; ++j)
                D.col(j - 1) = problem.Y.col(support[j]) - base;
            const Eigen::VectorXd t = D.completeOrthogonalDecomposition().solve(y0 - base);
            w[0] = 1.0 - t.sum();
            w.tail(k - 1) = t;
        }
        if (w.minCoeff() < -1e-12)
            continue;

        Eigen::VectorXd v = Eigen::VectorXd::Zero(n_all);
        for (int j = 0; j < k; ++j)
            v[support[j]] = std::max(w[j], 0.0);
        v /= v.sum();
        const double dist = (y0 - problem.Y * v).squaredNorm();
        if (dist < best)
        {
            best = dist;
            best_v = v;
        }
    }

    HullProjection out;
    out.v = best_v;
    out.distance = best;
    out.dual_gap = 0.0;
    out.iterations = 0;
    out.converged = true;
    return out;
}

} // namespace nchc
