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

// Sample covariance as an operator and the maximum entropy power spectrum.
//
// The sample covariance R = (1/K) sum_t x(t) x(t)^H (+ loading * I) is only
// ever applied to vectors, at O(MK) per product. The spectrum needs the
// first column of R^-1, v = R^-1 u1, which is found iteratively:
//
//     P(theta) = 1 / (eps_p |a(theta)^H v|^2),   eps_p = 1 / Re(v[0])
//
// Given v, each spectrum sample costs O(M).

#ifndef BEAMSIM_COVARIANCE_HPP
#define BEAMSIM_COVARIANCE_HPP

#include "beamsim/array_model.hpp"
#include "beamsim/linalg.hpp"

namespace beamsim
{
    class ImplicitSampleCovariance
    {
    public:
        // Non-owning: the batch must outlive this object.
        explicit ImplicitSampleCovariance(const SnapshotBatch &snapshots, double diagonal_loading = 0.0);
        ImplicitSampleCovariance(SnapshotBatch &&, double = 0.0) = delete;

        int dimension() const noexcept { return snapshots_->num_sensors(); }
        double diagonal_loading() const noexcept { return loading_; }
        const SnapshotBatch &snapshots() const noexcept { return *snapshots_; }

        // out = R z; out must not alias z
        void apply(ConstVectorView z, VectorView out) const;
        ComplexVector apply(ConstVectorView z) const;

        // trace(R) = (1/K) sum ||x(t)||^2 + M * loading; an upper bound on lambda_max
        double trace() const;

        // 1e-8 * trace(R_sample) / M, the explicit safety loading for rank-deficient batches
        static double safety_loading(const SnapshotBatch &snapshots);

    private:
        const SnapshotBatch *snapshots_;
        double loading_;
    };

    ComplexVector scm_matvec(const ImplicitSampleCovariance &cov, ConstVectorView z);

    // K / sum_t ||x(t)||^2. Throws DegenerateInputError for an all-zero batch.
    double step_size_xi(const SnapshotBatch &snapshots);

    enum class MepsSolver
    {
        conjugate_gradient,
        fixed_step, // v <- v + xi (u1 - R v), xi = 1 / trace(R)
    };

    struct MepsSolverOptions
    {
        double tol = 1e-8; // on ||u1 - R v|| (||u1|| = 1)
        int max_iter = 500;
        MepsSolver flavor = MepsSolver::conjugate_gradient;
        // Return the last iterate instead of throwing ConvergenceError when
        // max_iter is reached; the caller checks residual_norm against tol.
        bool return_last_iterate = false;
    };

    struct MepsSolution
    {
        ComplexVector v;
        double epsilon_p = 0.0;
        int iterations_used = 0;
        double residual_norm = 0.0;
    };

    // Solves R v = u1 using one R-product per iteration.
    // Throws ConvergenceError when max_iter is hit and SingularityError when the
    // operator shows non-positive curvature or the residual stops decreasing.
    MepsSolution solve_v(const ImplicitSampleCovariance &cov, const MepsSolverOptions &options = {});

    // Residual history variant used by diagnostics; history[i] is ||u1 - R v_i||
    // for i = 0..iterations (v_0 = 0).
    MepsSolution solve_v(const ImplicitSampleCovariance &cov, const MepsSolverOptions &options,
                         std::vector<double> &residual_history);

    // Builds the solution record (eps_p from Re(v[0])) from an externally computed v.
    MepsSolution make_meps_solution(ComplexVector v, int iterations, double residual_norm);

    // Re(v[0]) / |a^H v|^2. Throws DegenerateInputError when a^H v = 0.
    double meps_power(const MepsSolution &sol, ConstVectorView a_theta);

    // P(theta) on an arbitrary angle list, O(M) per angle.
    std::vector<double> meps_spectrum(const MepsSolution &sol, const ArrayGeometry &geom,
                                      const std::vector<double> &angles_deg);
}

#endif
