// SPDX-License-Identifier: Apache-2.0
//
// beamsim: matrix-free robust adaptive beamforming and Monte Carlo harness
// Copyright (C) 2026 The beamsim authors
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

#include "beamsim/covariance.hpp"
#include "beamsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamsim
{
    ImplicitSampleCovariance::ImplicitSampleCovariance(const SnapshotBatch &snapshots, double diagonal_loading)
        : snapshots_(&snapshots), loading_(diagonal_loading)
    {
        if (!(diagonal_loading >= 0.0) || !std::isfinite(diagonal_loading))
            throw DomainError("ImplicitSampleCovariance: diagonal loading must be finite and >= 0");
    }

    void ImplicitSampleCovariance::apply(ConstVectorView z, VectorView out) const
    {
        const auto M = static_cast<std::size_t>(dimension());
        require_same_size(M, z.size(), "scm_matvec");
        require_same_size(M, out.size(), "scm_matvec");

        const int K = snapshots_->num_snapshots();
        const double inv_k = 1.0 / static_cast<double>(K);
        for (std::size_t m = 0; m < M; ++m)
            out[m] = loading_ * z[m];
        for (int t = 0; t < K; ++t)
        {
            const ConstVectorView x = snapshots_->column(t);
            axpy(dot(x, z) * inv_k, x, out);
        }
    }

    ComplexVector ImplicitSampleCovariance::apply(ConstVectorView z) const
    {
        ComplexVector out(static_cast<std::size_t>(dimension()));
        apply(z, out);
        return out;
    }

    double ImplicitSampleCovariance::trace() const
    {
        double total = 0.0;
        for (int t = 0; t < snapshots_->num_snapshots(); ++t)
            total += norm_squared(snapshots_->column(t));
        return total / snapshots_->num_snapshots() + loading_ * dimension();
    }

    double ImplicitSampleCovariance::safety_loading(const SnapshotBatch &snapshots)
    {
        return 1e-8 * ImplicitSampleCovariance(snapshots).trace() / snapshots.num_sensors();
    }

    ComplexVector scm_matvec(const ImplicitSampleCovariance &cov, ConstVectorView z) { return cov.apply(z); }

    double step_size_xi(const SnapshotBatch &snapshots)
    {
        double total = 0.0;
        for (int t = 0; t < snapshots.num_snapshots(); ++t)
            total += norm_squared(snapshots.column(t));
        if (!(total > 0.0))
            throw DegenerateInputError("step_size_xi: all snapshots are zero");
        return static_cast<double>(snapshots.num_snapshots()) / total;
    }

    namespace
    {
        // Iterations allowed without improving the best residual before the
        // system is declared singular.
        int stagnation_window(int M) { return std::max(3 * M, 30); }

        MepsSolution solve_cg(const ImplicitSampleCovariance &cov, const MepsSolverOptions &opt,
                              std::vector<double> *history)
        {
            const auto M = static_cast<std::size_t>(cov.dimension());
            ComplexVector v(M, cplx{0.0, 0.0});
            ComplexVector r = unit_vector(M, 0);
            ComplexVector p = r;
            ComplexVector Ap(M);

            double rr = norm_squared(r);
            double best = std::sqrt(rr);
            int since_best = 0;
            if (history)
                history->push_back(best);

            for (int it = 1; it <= opt.max_iter; ++it)
            {
                cov.apply(p, Ap);
                const double curvature = dot(p, Ap).real();
                if (!(curvature > 1e-300 * norm_squared(p)))
                    throw SingularityError("solve_v: non-positive curvature, sample covariance is singular");

                const double alpha = rr / curvature;
                axpy(alpha, p, v);
                axpy(-alpha, Ap, r);
                const double rr_next = norm_squared(r);
                double res = std::sqrt(rr_next);

                if (res <= opt.tol)
                {
                    // Guard against drift of the recursive residual.
                    ComplexVector Rv = cov.apply(v);
                    for (std::size_t m = 0; m < M; ++m)
                        r[m] = (m == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - Rv[m];
                    res = norm(r);
                    if (history)
                        history->push_back(res);
                    if (res <= opt.tol)
                        return make_meps_solution(std::move(v), it, res);
                    rr = norm_squared(r);
                    p = r;
                    continue;
                }
                if (history)
                    history->push_back(res);

                if (res < best * (1.0 - 1e-6))
                {
                    best = res;
                    since_best = 0;
                }
                else if (++since_best >= stagnation_window(static_cast<int>(M)))
                {
                    throw SingularityError("solve_v: residual stagnated at " + std::to_string(res) +
                                           ", sample covariance is singular or ill-conditioned");
                }

                const double beta = rr_next / rr;
                rr = rr_next;
                for (std::size_t m = 0; m < M; ++m)
                    p[m] = r[m] + beta * p[m];
            }
            if (opt.return_last_iterate)
            {
                ComplexVector Rv = cov.apply(v);
                for (std::size_t m = 0; m < M; ++m)
                    r[m] = (m == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - Rv[m];
                return make_meps_solution(std::move(v), opt.max_iter, norm(r));
            }
            throw ConvergenceError("solve_v: no convergence after " + std::to_string(opt.max_iter) +
                                       " iterations (residual " + std::to_string(std::sqrt(rr)) + ")",
                                   std::sqrt(rr), opt.max_iter);
        }

        MepsSolution solve_fixed_step(const ImplicitSampleCovariance &cov, const MepsSolverOptions &opt,
                                      std::vector<double> *history)
        {
            const auto M = static_cast<std::size_t>(cov.dimension());
            const double bound = cov.trace();
            if (!(bound > 0.0))
                throw DegenerateInputError("solve_v: sample covariance is zero");
            const double xi = 1.0 / bound;

            ComplexVector v(M, cplx{0.0, 0.0});
            ComplexVector r = unit_vector(M, 0); // u1 - R v
            ComplexVector Rv(M);
            double res = 1.0;
            if (history)
                history->push_back(res);

            for (int it = 1; it <= opt.max_iter; ++it)
            {
                axpy(xi, r, v);
                cov.apply(v, Rv);
                for (std::size_t m = 0; m < M; ++m)
                    r[m] = (m == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0}) - Rv[m];
                res = norm(r);
                if (history)
                    history->push_back(res);
                if (res <= opt.tol)
                    return make_meps_solution(std::move(v), it, res);
            }
            if (opt.return_last_iterate)
                return make_meps_solution(std::move(v), opt.max_iter, res);
            throw ConvergenceError("solve_v (fixed step): no convergence after " + std::to_string(opt.max_iter) +
                                       " iterations (residual " + std::to_string(res) + ")",
                                   res, opt.max_iter);
        }
    }

    MepsSolution solve_v(const ImplicitSampleCovariance &cov, const MepsSolverOptions &options,
                         std::vector<double> &residual_history)
    {
        if (!(options.tol > 0.0))
            throw DomainError("solve_v: tolerance must be positive");
        if (options.max_iter < 1)
            throw DomainError("solve_v: max_iter must be >= 1");
        residual_history.clear();
        return options.flavor == MepsSolver::conjugate_gradient ? solve_cg(cov, options, &residual_history)
                                                                : solve_fixed_step(cov, options, &residual_history);
    }

    MepsSolution solve_v(const ImplicitSampleCovariance &cov, const MepsSolverOptions &options)
    {
        if (!(options.tol > 0.0))
            throw DomainError("solve_v: tolerance must be positive");
        if (options.max_iter < 1)
            throw DomainError("solve_v: max_iter must be >= 1");
        return options.flavor == MepsSolver::conjugate_gradient ? solve_cg(cov, options, nullptr)
                                                                : solve_fixed_step(cov, options, nullptr);
    }

    MepsSolution make_meps_solution(ComplexVector v, int iterations, double residual_norm)
    {
        if (v.empty())
            throw DomainError("make_meps_solution: empty vector");
        const cplx v0 = v[0];
        if (!(v0.real() > 0.0))
            throw SingularityError("solve_v: Re(v[0]) <= 0, sample covariance is not positive definite");
        if (std::abs(v0.imag()) >= 1e-6 * std::abs(v0))
            throw DegenerateInputError("solve_v: u1^T R^-1 u1 has a non-negligible imaginary part");
        MepsSolution sol;
        sol.v = std::move(v);
        sol.epsilon_p = 1.0 / v0.real();
        sol.iterations_used = iterations;
        sol.residual_norm = residual_norm;
        return sol;
    }

    double meps_power(const MepsSolution &sol, ConstVectorView a_theta)
    {
        const double denom = std::norm(dot(a_theta, sol.v));
        const double power = sol.v.at(0).real() / denom;
        if (!(denom > 0.0) || !std::isfinite(power))
            throw DegenerateInputError("meps_power: a^H v = 0, spectrum is degenerate at this angle");
        return power;
    }

    std::vector<double> meps_spectrum(const MepsSolution &sol, const ArrayGeometry &geom,
                                      const std::vector<double> &angles_deg)
    {
        std::vector<double> out;
        out.reserve(angles_deg.size());
        ComplexVector a(static_cast<std::size_t>(geom.num_sensors()));
        for (double theta : angles_deg)
        {
            steering_vector_into(geom, theta, a);
            out.push_back(meps_power(sol, a));
        }
        return out;
    }
}
