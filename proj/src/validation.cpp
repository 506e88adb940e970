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

#include "beamsim/validation.hpp"
#include "beamsim/baselines.hpp"
#include "beamsim/covariance.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace beamsim
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double elapsed(Clock::time_point start)
        {
            return std::chrono::duration<double>(Clock::now() - start).count();
        }

        double uniform(Rng &rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

        CheckResult finish(std::string name, double worst, double threshold, Clock::time_point start,
                           std::string detail = {})
        {
            CheckResult r;
            r.name = std::move(name);
            r.worst = worst;
            r.threshold = threshold;
            r.passed = worst < threshold;
            r.seconds = elapsed(start);
            r.detail = std::move(detail);
            return r;
        }
    }

    SnapshotBatch random_batch(Rng &rng, int M, int K)
    {
        const ArrayGeometry geom(M, 1.0);
        const SourceSpec desired{uniform(rng, -60.0, 60.0), uniform(rng, -10.0, 30.0)};
        std::vector<SourceSpec> interferers;
        const int count = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int i = 0; i < count; ++i)
            interferers.push_back({uniform(rng, -90.0, 90.0), uniform(rng, 0.0, 30.0)});
        return generate_snapshots(geom, desired, interferers, NoMismatch{}, K, rng).batch;
    }

    SpectrumSamples random_spectrum_samples(Rng &rng, const ArrayGeometry &geom, int Q)
    {
        const AngularSector sector({{-90.0, -1.0}, {11.0, 90.0}}, Q);
        std::vector<double> angles = sector.sample_angles();
        std::vector<double> powers;
        std::vector<ComplexVector> steering;
        for (double theta : angles)
        {
            powers.push_back(std::pow(10.0, uniform(rng, -1.0, 3.0)));
            steering.push_back(steering_vector(geom, theta));
        }
        return SpectrumSamples(std::move(angles), std::move(powers), std::move(steering), sector.spacing_rad());
    }

    ComplexVector random_steering_estimate(Rng &rng, int M)
    {
        ComplexVector a(static_cast<std::size_t>(M));
        for (auto &x : a)
            x = complex_gaussian(rng, 1.0);
        scale(std::sqrt(static_cast<double>(M)) / norm(a), a);
        return a;
    }

    CheckResult check_spectrum_equivalence(std::uint64_t seed, int trials)
    {
        const auto start = Clock::now();
        Rng rng(seed);
        const ArrayGeometry geom(10, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < trials; ++trial)
        {
            const SnapshotBatch batch = random_batch(rng, 10, 30);
            const MepsSolution sol = solve_v(ImplicitSampleCovariance(batch));
            const DenseHermitian R = dense_sample_covariance(batch);
            for (int deg = -90; deg <= 90; ++deg)
            {
                const ComplexVector a = steering_vector(geom, deg);
                const double p_implicit = meps_power(sol, a);
                const double p_dense = dense_meps_power(R, a);
                worst = std::max(worst, std::abs(p_implicit - p_dense) / p_dense);
            }
        }
        return finish("spectrum equivalence", worst, 1e-6, start);
    }

    CheckResult check_beamformer_equivalence(std::uint64_t seed, int trials)
    {
        const auto start = Clock::now();
        Rng rng(seed);
        const ArrayGeometry geom(10, 1.0);
        double worst_w = 0.0, worst_sinr = 0.0;
        for (int trial = 0; trial < trials; ++trial)
        {
            const SpectrumSamples samples = random_spectrum_samples(rng, geom, 90);
            const ComplexVector a_hat = random_steering_estimate(rng, 10);
            const BeamformerResult bf = solve_beamformer(samples, a_hat, {1e-6, 20});
            const DenseHermitian R = dense_from_spectrum(samples);
            const ComplexVector w_dense = mvdr_weights(R, a_hat);
            worst_w = std::max(worst_w, relative_error(bf.weights, w_dense));

            // SINR with the reconstructed matrix as interference and a_hat as the signal
            const TruthModel truth{{PathComponent{0.0, a_hat, 1.0}}, R, 1.0};
            worst_sinr = std::max(worst_sinr, std::abs(output_sinr(bf.weights, truth) - output_sinr(w_dense, truth)));
        }
        std::ostringstream detail;
        detail << "max SINR difference " << worst_sinr << " dB (limit 0.01)";
        CheckResult r = finish("beamformer equivalence", worst_w, 1e-4, start, detail.str());
        r.passed = r.passed && worst_sinr < 0.01;
        return r;
    }

    CheckResult check_gradient(std::uint64_t seed, int trials)
    {
        const auto start = Clock::now();
        Rng rng(seed);
        const ArrayGeometry geom(10, 1.0);
        const double h = 1e-6;
        double worst = 0.0;
        for (int trial = 0; trial < trials; ++trial)
        {
            const SpectrumSamples samples = random_spectrum_samples(rng, geom, 90);
            const ComplexVector a_hat = random_steering_estimate(rng, 10);
            ComplexVector w = random_steering_estimate(rng, 10);
            const double alpha = uniform(rng, -5.0, 5.0);
            const DenseHermitian R = dense_from_spectrum(samples);

            // Cost through the dense matrix, independent of npic_matvec.
            auto cost = [&](const ComplexVector &x)
            { return dot(x, R.apply(x)).real() + alpha * (dot(x, a_hat).real() - 1.0); };

            ComplexVector fd(w.size());
            for (std::size_t m = 0; m < w.size(); ++m)
            {
                for (const cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}})
                {
                    const cplx saved = w[m];
                    w[m] = saved + h * dir;
                    const double plus = cost(w);
                    w[m] = saved - h * dir;
                    const double minus = cost(w);
                    w[m] = saved;
                    fd[m] += dir * ((plus - minus) / (2.0 * h));
                }
            }
            worst = std::max(worst, relative_error(gradient(samples, w, alpha, a_hat), fd));
        }
        return finish("gradient finite differences", worst, 1e-5, start);
    }

    CheckResult check_step_size(std::uint64_t seed, int trials)
    {
        const auto start = Clock::now();
        Rng rng(seed);
        double worst_ratio = 0.0;
        double worst_increase = 0.0;
        for (int trial = 0; trial < trials; ++trial)
        {
            const SnapshotBatch batch = random_batch(rng, 10, 30);
            const double xi = step_size_xi(batch);
            worst_ratio = std::max(worst_ratio, xi * dense_sample_covariance(batch).lambda_max());

            std::vector<double> history;
            MepsSolverOptions opt;
            opt.flavor = MepsSolver::fixed_step;
            opt.max_iter = 200;
            opt.tol = 1e-300;
            opt.return_last_iterate = true;
            solve_v(ImplicitSampleCovariance(batch), opt, history);
            for (std::size_t i = 1; i < history.size(); ++i)
                worst_increase = std::max(worst_increase, (history[i] - history[i - 1]) / history[i - 1]);
        }
        std::ostringstream detail;
        detail << "largest relative residual increase " << worst_increase << " (must be <= 1e-12)";
        // ratio must be <= 1; report it against a strict threshold just above 1
        CheckResult r = finish("step-size bound", worst_ratio, 1.0 + 1e-12, start, detail.str());
        r.passed = r.passed && worst_increase <= 1e-12;
        return r;
    }

    CheckResult check_npic_matvec(std::uint64_t seed, int trials)
    {
        const auto start = Clock::now();
        Rng rng(seed);
        const ArrayGeometry geom(10, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < trials; ++trial)
        {
            const SpectrumSamples samples = random_spectrum_samples(rng, geom, 90);
            const ComplexVector w = random_steering_estimate(rng, 10);
            worst = std::max(worst, relative_error(npic_matvec(samples, w), dense_from_spectrum(samples).apply(w)));
        }
        return finish("npic matvec equivalence", worst, 1e-12, start);
    }

    std::vector<CheckResult> run_oracle_checks(std::uint64_t seed)
    {
        return {check_spectrum_equivalence(seed), check_beamformer_equivalence(seed + 1), check_gradient(seed + 2),
                check_step_size(seed + 3), check_npic_matvec(seed + 4)};
    }
}
