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

#include "beamsim/npic_cg.hpp"
#include "beamsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace beamsim
{
    // ---------------------------------------------------------------- AngularSector

    AngularSector::AngularSector(std::vector<AngleInterval> intervals, int num_samples)
        : intervals_(std::move(intervals)), num_samples_(num_samples)
    {
        if (intervals_.empty())
            throw DomainError("AngularSector: no intervals");
        if (num_samples_ < 1)
            throw DomainError("AngularSector: num_samples must be >= 1");
        for (const auto &iv : intervals_)
        {
            if (!(iv.lo_deg >= -90.0 && iv.hi_deg <= 90.0))
                throw DomainError("AngularSector: interval outside [-90, 90]");
            if (!(iv.lo_deg < iv.hi_deg))
                throw DomainError("AngularSector: interval needs lo < hi");
        }
        std::vector<AngleInterval> sorted = intervals_;
        std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.lo_deg < b.lo_deg; });
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (sorted[i].lo_deg < sorted[i - 1].hi_deg)
                throw DomainError("AngularSector: intervals overlap");
    }

    double AngularSector::total_width_deg() const
    {
        double w = 0.0;
        for (const auto &iv : intervals_)
            w += iv.width();
        return w;
    }

    double AngularSector::spacing_rad() const { return deg_to_rad(total_width_deg() / num_samples_); }

    std::vector<int> AngularSector::allocation() const
    {
        const double total = total_width_deg();
        std::vector<int> counts(intervals_.size());
        std::vector<double> fraction(intervals_.size());
        int assigned = 0;
        for (std::size_t i = 0; i < intervals_.size(); ++i)
        {
            const double share = num_samples_ * intervals_[i].width() / total;
            counts[i] = static_cast<int>(std::floor(share));
            fraction[i] = share - counts[i];
            assigned += counts[i];
        }
        std::vector<std::size_t> order(intervals_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fraction[a] > fraction[b]; });
        for (std::size_t k = 0; assigned < num_samples_; ++k, ++assigned)
            ++counts[order[k % order.size()]];
        return counts;
    }

    std::vector<double> AngularSector::sample_angles() const
    {
        const std::vector<int> counts = allocation();
        std::vector<double> angles;
        angles.reserve(static_cast<std::size_t>(num_samples_));
        for (std::size_t i = 0; i < intervals_.size(); ++i)
        {
            if (counts[i] == 0)
                continue;
            const double step = intervals_[i].width() / counts[i];
            for (int j = 0; j < counts[i]; ++j)
                angles.push_back(intervals_[i].lo_deg + (j + 0.5) * step);
        }
        return angles;
    }

    bool AngularSector::contains(double theta_deg) const
    {
        return std::any_of(intervals_.begin(), intervals_.end(),
                           [&](const auto &iv) { return theta_deg >= iv.lo_deg && theta_deg <= iv.hi_deg; });
    }

    // ---------------------------------------------------------------- SpectrumSamples

    SpectrumSamples::SpectrumSamples(std::vector<double> angles_deg, std::vector<double> powers,
                                     std::vector<ComplexVector> steering, double delta_theta_rad)
        : angles_deg_(std::move(angles_deg)), powers_(std::move(powers)), steering_(std::move(steering)),
          delta_theta_(delta_theta_rad)
    {
        if (powers_.empty())
            throw DomainError("SpectrumSamples: no samples");
        if (angles_deg_.size() != powers_.size() || steering_.size() != powers_.size())
            throw DomainError("SpectrumSamples: angles, powers and steering vectors differ in length");
        for (double p : powers_)
            if (!(p > 0.0) || !std::isfinite(p))
                throw DomainError("SpectrumSamples: powers must be finite and positive");
        for (const auto &a : steering_)
            require_same_size(steering_.front().size(), a.size(), "SpectrumSamples");
        if (!(delta_theta_ > 0.0))
            throw DomainError("SpectrumSamples: grid spacing must be positive");
    }

    SpectrumSamples SpectrumSamples::rescaled(double c) const
    {
        std::vector<double> p = powers_;
        for (auto &x : p)
            x *= c;
        return SpectrumSamples(angles_deg_, std::move(p), steering_, delta_theta_);
    }

    void SpectrumSamples::apply(ConstVectorView w, VectorView out) const
    {
        require_same_size(dimension(), w.size(), "npic_matvec");
        require_same_size(dimension(), out.size(), "npic_matvec");
        std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < powers_.size(); ++i)
            axpy(powers_[i] * delta_theta_ * dot(steering_[i], w), steering_[i], out);
    }

    double SpectrumSamples::trace() const
    {
        double t = 0.0;
        for (std::size_t i = 0; i < powers_.size(); ++i)
            t += powers_[i] * delta_theta_ * norm_squared(steering_[i]);
        return t;
    }

    // ---------------------------------------------------------------- operations

    SpectrumSamples sample_spectrum(const AngularSector &sector, const MepsSolution &sol, const ArrayGeometry &geom)
    {
        require_same_size(static_cast<std::size_t>(geom.num_sensors()), sol.v.size(), "sample_spectrum");
        std::vector<double> angles = sector.sample_angles();
        std::vector<double> powers;
        std::vector<ComplexVector> steering;
        powers.reserve(angles.size());
        steering.reserve(angles.size());
        for (double theta : angles)
        {
            steering.push_back(steering_vector(geom, theta));
            powers.push_back(meps_power(sol, steering.back()));
        }
        return SpectrumSamples(std::move(angles), std::move(powers), std::move(steering), sector.spacing_rad());
    }

    ComplexVector reconstruct_sv(const SpectrumSamples &signal_samples, ConstVectorView nominal_sv)
    {
        const double nominal_norm = norm(nominal_sv);
        if (!(nominal_norm > 0.0))
            throw DomainError("reconstruct_sv: nominal steering vector is zero");
        ComplexVector a_hat(signal_samples.dimension());
        signal_samples.apply(nominal_sv, a_hat);

        const double n = norm(a_hat);
        if (!(n >= 1e-12 * nominal_norm))
            throw DegenerateInputError("reconstruct_sv: nominal steering vector is orthogonal to the signal sector");
        scale(std::sqrt(static_cast<double>(a_hat.size())) / n, a_hat);
        return a_hat;
    }

    ComplexVector npic_matvec(const SpectrumSamples &npic_samples, ConstVectorView w)
    {
        ComplexVector out(npic_samples.dimension());
        npic_samples.apply(w, out);
        return out;
    }

    ComplexVector gradient(const SpectrumSamples &npic_samples, ConstVectorView w, double alpha, ConstVectorView a_hat)
    {
        require_same_size(npic_samples.dimension(), a_hat.size(), "gradient");
        ComplexVector g = npic_matvec(npic_samples, w);
        scale(2.0, g);
        axpy(alpha, a_hat, g);
        return g;
    }

    double lagrangian_cost(const SpectrumSamples &npic_samples, ConstVectorView w, double alpha,
                           ConstVectorView a_hat)
    {
        const ComplexVector Rw = npic_matvec(npic_samples, w);
        return dot(w, Rw).real() + alpha * (dot(w, a_hat).real() - 1.0);
    }

    namespace
    {
        BeamformerResult finish(ComplexVector w, ConstVectorView a_hat, int iterations, double rel_grad, bool converged)
        {
            const cplx response = dot(a_hat, w);
            if (!(std::abs(response) > 0.0))
                throw DegenerateInputError("solve_beamformer: weights orthogonal to the steering estimate");
            scale(1.0 / response, w);
            BeamformerResult out;
            out.weights = std::move(w);
            out.estimated_sv.assign(a_hat.begin(), a_hat.end());
            out.iterations_used = iterations;
            out.final_gradient_norm = rel_grad;
            out.converged = converged;
            return out;
        }

        // Algorithm: g_t = R w_t - a0 is the gradient of the residual form,
        // e_t the search direction, exact line search for mu_t and
        // Polak-Ribiere beta_t.
        BeamformerResult solve_cg(const SpectrumSamples &R, ConstVectorView a_hat, const BeamformerOptions &opt)
        {
            const std::size_t M = a_hat.size();
            const double a_norm = norm(a_hat);

            ComplexVector w(M, cplx{0.0, 0.0});
            ComplexVector g = scaled(-1.0, a_hat);
            ComplexVector e(a_hat.begin(), a_hat.end());
            ComplexVector Re(M);
            double gg = norm_squared(g);

            int t = 0;
            while (std::sqrt(gg) > opt.tol * a_norm && t < opt.max_iter)
            {
                R.apply(e, Re);
                const double curvature = dot(e, Re).real();
                if (!(curvature > 0.0))
                    throw SingularityError("solve_beamformer: non-positive curvature e^H R e");
                const double mu = -dot(e, g).real() / curvature;
                axpy(mu, e, w);

                // g_{t+1} = g_t + mu R e_t, beta from (g_{t+1} - g_t) = mu R e_t
                axpy(mu, Re, g);
                const double gg_next = norm_squared(g);
                const double beta = mu * dot(g, Re).real() / gg;
                for (std::size_t m = 0; m < M; ++m)
                    e[m] = -g[m] + beta * e[m];
                gg = gg_next;
                ++t;
            }
            const double rel = std::sqrt(gg) / a_norm;
            return finish(std::move(w), a_hat, t, rel, rel <= opt.tol);
        }

        BeamformerResult solve_fixed_step(const SpectrumSamples &R, ConstVectorView a_hat,
                                          const BeamformerOptions &opt)
        {
            const std::size_t M = a_hat.size();
            const double a_norm = norm(a_hat);
            const double mu = 1.0 / R.trace();

            ComplexVector w(M, cplx{0.0, 0.0});
            ComplexVector r(a_hat.begin(), a_hat.end()); // a0 - R w
            ComplexVector Rw(M);
            double res = a_norm;
            int t = 0;
            while (res > opt.tol * a_norm && t < opt.max_iter)
            {
                axpy(mu, r, w);
                R.apply(w, Rw);
                for (std::size_t m = 0; m < M; ++m)
                    r[m] = a_hat[m] - Rw[m];
                res = norm(r);
                ++t;
            }
            const double rel = res / a_norm;
            return finish(std::move(w), a_hat, t, rel, rel <= opt.tol);
        }
    }

    BeamformerResult solve_beamformer(const SpectrumSamples &npic_samples, ConstVectorView a_hat,
                                      const BeamformerOptions &options)
    {
        require_same_size(npic_samples.dimension(), a_hat.size(), "solve_beamformer");
        if (!(options.tol >= 0.0))
            throw DomainError("solve_beamformer: tolerance must be >= 0");
        if (options.max_iter < 1)
            throw DomainError("solve_beamformer: max_iter must be >= 1");
        if (!(norm(a_hat) > 0.0))
            throw DomainError("solve_beamformer: steering estimate is zero");
        return options.flavor == BeamformerSolver::conjugate_gradient ? solve_cg(npic_samples, a_hat, options)
                                                                      : solve_fixed_step(npic_samples, a_hat, options);
    }

    MepsNpicCgOutput meps_npic_cg(const SnapshotBatch &snapshots, const MepsNpicCgConfig &config)
    {
        require_same_size(static_cast<std::size_t>(config.geometry.num_sensors()),
                          static_cast<std::size_t>(snapshots.num_sensors()), "meps_npic_cg");
        const ImplicitSampleCovariance cov(snapshots, config.diagonal_loading);

        MepsNpicCgOutput out;
        out.meps = solve_v(cov, config.meps);
        out.meps_converged = out.meps.residual_norm <= config.meps.tol;

        const SpectrumSamples signal = sample_spectrum(config.signal_sector, out.meps, config.geometry);
        const SpectrumSamples npic = sample_spectrum(config.complement_sector, out.meps, config.geometry);
        const ComplexVector nominal = steering_vector(config.geometry, config.nominal_doa_deg);
        const ComplexVector a_hat = reconstruct_sv(signal, nominal);
        out.beamformer = solve_beamformer(npic, a_hat, config.beamformer);
        return out;
    }
}
