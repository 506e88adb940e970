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

#include "beamsim/baselines.hpp"
#include "beamsim/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace beamsim
{
    DenseHermitian::DenseHermitian(Eigen::MatrixXcd entries) : entries_(std::move(entries))
    {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
            throw DomainError("DenseHermitian: matrix must be square and non-empty");
        const double asym = (entries_ - entries_.adjoint()).norm();
        if (asym > 1e-9 * std::max(1.0, entries_.norm()))
            throw DomainError("DenseHermitian: matrix is not Hermitian");
        // Remove rounding asymmetry.
        entries_ = (0.5 * (entries_ + entries_.adjoint())).eval();
    }

    DenseHermitian DenseHermitian::identity(int M) { return DenseHermitian(Eigen::MatrixXcd::Identity(M, M)); }

    ComplexVector DenseHermitian::apply(ConstVectorView z) const
    {
        require_same_size(static_cast<std::size_t>(dimension()), z.size(), "DenseHermitian::apply");
        return from_eigen(entries_ * to_eigen(z));
    }

    double DenseHermitian::lambda_max() const
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(entries_, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().maxCoeff();
    }

    double DenseHermitian::lambda_min() const
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(entries_, Eigen::EigenvaluesOnly);
        return eig.eigenvalues().minCoeff();
    }

    DenseHermitian DenseHermitian::plus_identity(double c) const
    {
        return DenseHermitian(entries_ + c * Eigen::MatrixXcd::Identity(dimension(), dimension()));
    }

    TruthModel TruthModel::from_scenario(const ScenarioTruth &truth, int M)
    {
        if (truth.desired.empty())
            throw DomainError("TruthModel: no desired signal paths");
        Eigen::MatrixXcd npic = truth.noise_power * Eigen::MatrixXcd::Identity(M, M);
        for (const auto &path : truth.interference)
        {
            const Eigen::VectorXcd a = to_eigen(path.sv);
            npic += path.power * a * a.adjoint();
        }
        double total = 0.0;
        for (const auto &path : truth.desired)
        {
            require_same_size(static_cast<std::size_t>(M), path.sv.size(), "TruthModel");
            total += path.power;
        }
        return TruthModel{truth.desired, DenseHermitian(std::move(npic)), total};
    }

    Eigen::VectorXcd to_eigen(ConstVectorView v)
    {
        Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = v[i];
        return out;
    }

    ComplexVector from_eigen(const Eigen::VectorXcd &v) { return ComplexVector(v.data(), v.data() + v.size()); }

    DenseHermitian dense_from_spectrum(const SpectrumSamples &samples)
    {
        const auto M = static_cast<Eigen::Index>(samples.dimension());
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(M, M);
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const Eigen::VectorXcd a = to_eigen(samples.steering()[i]);
            R += samples.powers()[i] * samples.delta_theta() * a * a.adjoint();
        }
        return DenseHermitian(std::move(R));
    }

    DenseHermitian dense_sample_covariance(const SnapshotBatch &snapshots, double loading)
    {
        const Eigen::Index M = snapshots.num_sensors();
        const Eigen::Index K = snapshots.num_snapshots();
        const Eigen::Map<const Eigen::MatrixXcd> X(snapshots.data().data(), M, K);
        Eigen::MatrixXcd R = X * X.adjoint() / static_cast<double>(K);
        R += loading * Eigen::MatrixXcd::Identity(M, M);
        return DenseHermitian(std::move(R));
    }

    ComplexVector solve_dense(const DenseHermitian &A, ConstVectorView b)
    {
        require_same_size(static_cast<std::size_t>(A.dimension()), b.size(), "solve_dense");
        const Eigen::MatrixXcd &a = A.entries();
        Eigen::LLT<Eigen::MatrixXcd> llt(a);
        if (llt.info() != Eigen::Success)
            throw SingularityError("solve_dense: matrix is not positive definite");

        // A numerically rank-deficient PSD matrix can still factor with
        // rounding-level pivots; treat those as singular.
        const Eigen::VectorXd pivots = llt.matrixL().toDenseMatrix().diagonal().real().cwiseAbs2();
        const double scale = a.diagonal().real().maxCoeff();
        if (!(pivots.minCoeff() > 1e-13 * scale))
            throw SingularityError("solve_dense: negligible pivot, matrix is numerically singular");

        const Eigen::VectorXcd rhs = to_eigen(b);
        Eigen::VectorXcd x = llt.solve(rhs);
        Eigen::VectorXcd r = rhs - a * x;
        if (r.norm() > 1e-10 * rhs.norm())
        {
            x += llt.solve(r); // one refinement step
            r = rhs - a * x;
            if (r.norm() > 1e-10 * rhs.norm())
                throw SingularityError("solve_dense: residual " + std::to_string(r.norm() / rhs.norm()) +
                                       " exceeds 1e-10, matrix too ill-conditioned");
        }
        return from_eigen(x);
    }

    ComplexVector mvdr_weights(const DenseHermitian &npic, ConstVectorView sv)
    {
        if (!(norm(sv) > 0.0))
            throw DomainError("mvdr_weights: zero steering vector");
        ComplexVector w = solve_dense(npic, sv);
        const cplx denom = dot(sv, w);
        scale(1.0 / denom, w);
        return w;
    }

    ComplexVector smi_weights(const SnapshotBatch &snapshots, ConstVectorView sv, double loading)
    {
        if (!(loading >= 0.0))
            throw DomainError("smi_weights: loading must be >= 0");
        if (loading == 0.0 && snapshots.num_snapshots() < snapshots.num_sensors())
            throw SingularityError("smi_weights: K < M without loading, sample covariance is singular");
        return mvdr_weights(dense_sample_covariance(snapshots, loading), sv);
    }

    double dense_meps_power(const DenseHermitian &R, ConstVectorView a_theta)
    {
        const ComplexVector v = solve_dense(R, unit_vector(static_cast<std::size_t>(R.dimension()), 0));
        const double denom = std::norm(dot(a_theta, v));
        if (!(denom > 0.0))
            throw DegenerateInputError("dense_meps_power: a^H R^-1 u1 = 0");
        return v[0].real() / denom;
    }

    namespace
    {
        Eigen::MatrixXcd desired_covariance(const TruthModel &truth)
        {
            const Eigen::Index M = truth.true_npic.dimension();
            Eigen::MatrixXcd Rs = Eigen::MatrixXcd::Zero(M, M);
            for (const auto &path : truth.desired)
            {
                const Eigen::VectorXcd a = to_eigen(path.sv);
                Rs += path.power * a * a.adjoint();
            }
            return Rs;
        }
    }

    ComplexVector optimal_weights(const TruthModel &truth)
    {
        if (truth.desired.size() == 1)
            return mvdr_weights(truth.true_npic, truth.desired.front().sv);

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(desired_covariance(truth),
                                                                        truth.true_npic.entries());
        if (ges.info() != Eigen::Success)
            throw SingularityError("optimal_weights: generalized eigenproblem failed");
        const Eigen::Index last = ges.eigenvalues().size() - 1;
        return from_eigen(ges.eigenvectors().col(last));
    }

    double optimal_sinr_db(const TruthModel &truth)
    {
        if (truth.desired.size() == 1)
        {
            const auto &path = truth.desired.front();
            const ComplexVector x = solve_dense(truth.true_npic, path.sv);
            return 10.0 * std::log10(path.power * dot(path.sv, x).real());
        }
        return output_sinr(optimal_weights(truth), truth);
    }

    double output_sinr(ConstVectorView w, const TruthModel &truth)
    {
        require_same_size(static_cast<std::size_t>(truth.true_npic.dimension()), w.size(), "output_sinr");
        if (!(norm(w) > 0.0))
            throw DomainError("output_sinr: zero weight vector");
        double signal = 0.0;
        for (const auto &path : truth.desired)
            signal += path.power * std::norm(dot(w, path.sv));
        const double interference = dot(w, truth.true_npic.apply(w)).real();
        return 10.0 * std::log10(signal / interference);
    }
}
