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

// Dense reference path: explicit covariance matrices, direct Hermitian
// solves, the classical MVDR / SMI beamformers and the output SINR metric.
// Intended for small arrays (M <= 64); the matrix-free code never calls in here.

#ifndef BEAMSIM_BASELINES_HPP
#define BEAMSIM_BASELINES_HPP

#include "beamsim/array_model.hpp"
#include "beamsim/linalg.hpp"
#include "beamsim/npic_cg.hpp"

#include <Eigen/Dense>

namespace beamsim
{
    class DenseHermitian
    {
    public:
        explicit DenseHermitian(Eigen::MatrixXcd entries);

        static DenseHermitian identity(int M);

        int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
        const Eigen::MatrixXcd &entries() const noexcept { return entries_; }

        ComplexVector apply(ConstVectorView z) const;
        double lambda_max() const;
        double lambda_min() const;

        DenseHermitian plus_identity(double c) const;

    private:
        Eigen::MatrixXcd entries_;
    };

    // Truth for the SINR metric. desired holds one path for a deterministic
    // steering vector and several for incoherent scattering.
    struct TruthModel
    {
        std::vector<PathComponent> desired;
        DenseHermitian true_npic;
        double desired_power = 0.0;

        static TruthModel from_scenario(const ScenarioTruth &truth, int M);
    };

    Eigen::VectorXcd to_eigen(ConstVectorView v);
    ComplexVector from_eigen(const Eigen::VectorXcd &v);

    // sum_i P_i a_i a_i^H dtheta, materialized
    DenseHermitian dense_from_spectrum(const SpectrumSamples &samples);

    // (1/K) X X^H + loading I
    DenseHermitian dense_sample_covariance(const SnapshotBatch &snapshots, double loading = 0.0);

    // Cholesky solve with residual check ||b - A x|| <= 1e-10 ||b||.
    // Throws SingularityError on a non-positive or negligible pivot.
    ComplexVector solve_dense(const DenseHermitian &A, ConstVectorView b);

    // R^-1 a / (a^H R^-1 a)
    ComplexVector mvdr_weights(const DenseHermitian &npic, ConstVectorView sv);

    ComplexVector smi_weights(const SnapshotBatch &snapshots, ConstVectorView sv, double loading);

    // Maximum entropy power computed through an explicit inverse column.
    double dense_meps_power(const DenseHermitian &R, ConstVectorView a_theta);

    // Max-SINR weights: MVDR toward the single desired path, or the principal
    // generalized eigenvector of (R_s, R_in) for a multi-path desired signal.
    ComplexVector optimal_weights(const TruthModel &truth);

    double optimal_sinr_db(const TruthModel &truth);

    // 10 log10( w^H R_s w / w^H R_in w ), R_s = sum_p sigma_p^2 a_p a_p^H
    double output_sinr(ConstVectorView w, const TruthModel &truth);
}

#endif
