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

// MEPS-NPIC-CG beamformer.
//
// A reconstructed covariance is held only as spectrum samples
// {P_i, a(theta_i)} over an angular sector; the matrix
//
//     R = sum_i P_i a(theta_i) a(theta_i)^H dtheta
//
// is applied to a vector in O(MQ) and never formed. Over the signal sector the
// samples give the steering vector estimate a0 = R_s * a_nominal; over the
// complement they give the noise-plus-interference operator, and the weights
// are the conjugate-gradient solution of R_in w = a0 scaled to w^H a0 = 1.

#ifndef BEAMSIM_NPIC_CG_HPP
#define BEAMSIM_NPIC_CG_HPP

#include "beamsim/array_model.hpp"
#include "beamsim/covariance.hpp"
#include "beamsim/linalg.hpp"

#include <vector>

namespace beamsim
{
    struct AngleInterval
    {
        double lo_deg = 0.0;
        double hi_deg = 0.0;

        double width() const noexcept { return hi_deg - lo_deg; }
    };

    // Union of disjoint intervals sampled on a midpoint grid. Samples are
    // shared among intervals in proportion to width (largest remainder, ties
    // to the lower interval); interval endpoints are never sampled.
    class AngularSector
    {
    public:
        AngularSector(std::vector<AngleInterval> intervals, int num_samples);

        const std::vector<AngleInterval> &intervals() const noexcept { return intervals_; }
        int num_samples() const noexcept { return num_samples_; }

        double total_width_deg() const;
        // total width / num_samples, radians
        double spacing_rad() const;

        std::vector<int> allocation() const;
        std::vector<double> sample_angles() const;

        bool contains(double theta_deg) const;

    private:
        std::vector<AngleInterval> intervals_;
        int num_samples_;
    };

    class SpectrumSamples
    {
    public:
        SpectrumSamples(std::vector<double> angles_deg, std::vector<double> powers, std::vector<ComplexVector> steering,
                        double delta_theta_rad);

        std::size_t size() const noexcept { return powers_.size(); }
        std::size_t dimension() const noexcept { return steering_.front().size(); }

        const std::vector<double> &angles_deg() const noexcept { return angles_deg_; }
        const std::vector<double> &powers() const noexcept { return powers_; }
        const std::vector<ComplexVector> &steering() const noexcept { return steering_; }
        double delta_theta() const noexcept { return delta_theta_; }

        // Same angles and steering vectors, powers multiplied by c > 0.
        SpectrumSamples rescaled(double c) const;

        // out = sum_i P_i dtheta (a_i^H w) a_i, O(M * size()); out must not alias w
        void apply(ConstVectorView w, VectorView out) const;

        // trace of the implied matrix, sum_i P_i dtheta ||a_i||^2
        double trace() const;

    private:
        std::vector<double> angles_deg_;
        std::vector<double> powers_;
        std::vector<ComplexVector> steering_;
        double delta_theta_;
    };

    SpectrumSamples sample_spectrum(const AngularSector &sector, const MepsSolution &sol, const ArrayGeometry &geom);

    // a0 = sum_i P_i (a_i^H a_nominal) a_i dtheta, rescaled to ||a0||^2 = M.
    ComplexVector reconstruct_sv(const SpectrumSamples &signal_samples, ConstVectorView nominal_sv);

    ComplexVector npic_matvec(const SpectrumSamples &npic_samples, ConstVectorView w);

    // 2 R w + alpha a0
    ComplexVector gradient(const SpectrumSamples &npic_samples, ConstVectorView w, double alpha, ConstVectorView a_hat);

    // Real-valued Lagrangian w^H R w + alpha Re(w^H a0 - 1). Its derivative over
    // (Re w, Im w), packed as d/dRe + j d/dIm, is gradient().
    double lagrangian_cost(const SpectrumSamples &npic_samples, ConstVectorView w, double alpha,
                           ConstVectorView a_hat);

    enum class BeamformerSolver
    {
        conjugate_gradient,
        fixed_step, // w <- w + mu (a0 - R w), mu = 1 / trace(R)
    };

    struct BeamformerOptions
    {
        double tol = 1e-3;
        int max_iter = 7;
        BeamformerSolver flavor = BeamformerSolver::conjugate_gradient;
    };

    struct BeamformerResult
    {
        ComplexVector weights;       // scaled so that weights^H estimated_sv = 1
        ComplexVector estimated_sv;
        int iterations_used = 0;
        double final_gradient_norm = 0.0; // ||R w - a0|| / ||a0|| before scaling
        bool converged = false;
    };

    // Stops once ||R w - a0|| <= tol ||a0|| or after max_iter iterations (the
    // last iterate is returned with converged = false). Throws SingularityError
    // on non-positive curvature.
    BeamformerResult solve_beamformer(const SpectrumSamples &npic_samples, ConstVectorView a_hat,
                                      const BeamformerOptions &options = {});

    struct MepsNpicCgConfig
    {
        ArrayGeometry geometry;
        AngularSector signal_sector{{{-1.0, 11.0}}, 10};
        AngularSector complement_sector{{{-90.0, -1.0}, {11.0, 90.0}}, 90};
        double nominal_doa_deg = 5.0;
        double diagonal_loading = 0.0;
        MepsSolverOptions meps;
        BeamformerOptions beamformer;
    };

    struct MepsNpicCgOutput
    {
        BeamformerResult beamformer;
        MepsSolution meps;
        bool meps_converged = false;
    };

    // Snapshots -> weights: MEPS solve, spectrum sampling over both sectors,
    // steering vector estimate, CG weights. Never forms an M x M matrix.
    MepsNpicCgOutput meps_npic_cg(const SnapshotBatch &snapshots, const MepsNpicCgConfig &config);
}

#endif
