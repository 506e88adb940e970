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


#include "doctest.h"

#include "beamsim/baselines.hpp"
#include "beamsim/errors.hpp"
#include "beamsim/npic_cg.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>

using namespace beamsim;
using beamsim::test::max_abs_diff;
using beamsim::test::random_vector;

namespace
{
    const AngularSector kSignal({{-1.0, 11.0}}, 10);
    const AngularSector kComplement({{-90.0, -1.0}, {11.0, 90.0}}, 90);

    SpectrumSamples make_samples(const ArrayGeometry &geom, std::vector<double> angles, std::vector<double> powers,
                                 double delta)
    {
        std::vector<ComplexVector> steering;
        for (double th : angles)
            steering.push_back(steering_vector(geom, th));
        return SpectrumSamples(std::move(angles), std::move(powers), std::move(steering), delta);
    }

    // M directions with sin(theta_k) = -1 + 2k/M: mutually orthogonal steering
    // vectors (d = half wavelength), so sum_k a_k a_k^H = M I.
    SpectrumSamples isotropic_samples(const ArrayGeometry &geom, double power, double delta)
    {
        const int M = geom.num_sensors();
        std::vector<double> angles;
        for (int k = 0; k < M; ++k)
            angles.push_back(rad_to_deg(std::asin(-1.0 + 2.0 * k / M)));
        return make_samples(geom, angles, std::vector<double>(static_cast<std::size_t>(M), power), delta);
    }

    SnapshotBatch scenario_batch(std::uint64_t seed, double nominal_doa = 5.0)
    {
        Rng rng(seed);
        return generate_snapshots(ArrayGeometry(), {nominal_doa, 20.0}, {{20.0, 30.0}, {50.0, 30.0}}, NoMismatch{},
                                  30, rng)
            .batch;
    }

    SpectrumSamples scenario_npic_samples(std::uint64_t seed)
    {
        const auto batch = scenario_batch(seed);
        return sample_spectrum(kComplement, solve_v(ImplicitSampleCovariance(batch)), ArrayGeometry());
    }
}

TEST_CASE("angular sector: signal sector grid")
{
    const auto angles = kSignal.sample_angles();
    REQUIRE(angles.size() == 10);
    for (std::size_t i = 0; i < angles.size(); ++i)
        CHECK(angles[i] == doctest::Approx(-0.4 + 1.2 * static_cast<double>(i)));
    CHECK(kSignal.spacing_rad() == doctest::Approx(0.0209439510239).epsilon(1e-10));
    CHECK(kSignal.contains(5.0));
    CHECK_FALSE(kSignal.contains(11.5));
}

TEST_CASE("angular sector: complement allocation")
{
    // widths 89 and 79: shares 47.68 and 42.32 -> 48 and 42
    const auto counts = kComplement.allocation();
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] == 48);
    CHECK(counts[1] == 42);
    CHECK(kComplement.spacing_rad() == doctest::Approx(deg_to_rad(168.0 / 90.0)));

    const auto angles = kComplement.sample_angles();
    REQUIRE(angles.size() == 90);
    CHECK(std::is_sorted(angles.begin(), angles.end()));
    for (double a : angles)
    {
        CHECK(a != -1.0);
        CHECK(a != 11.0);
        CHECK_FALSE(kSignal.contains(a));
    }
    CHECK(angles.front() > -90.0);
    CHECK(angles.back() < 90.0);

    // exact tie goes to the lower interval
    const auto tie = AngularSector({{-10.0, 0.0}, {10.0, 20.0}}, 3).allocation();
    CHECK(tie[0] == 2);
    CHECK(tie[1] == 1);
}

TEST_CASE("angular sector: validation")
{
    CHECK_THROWS_AS(AngularSector({}, 4), DomainError);
    CHECK_THROWS_AS(AngularSector({{0.0, 10.0}}, 0), DomainError);
    CHECK_THROWS_AS(AngularSector({{10.0, 0.0}}, 3), DomainError);
    CHECK_THROWS_AS(AngularSector({{-95.0, 0.0}}, 3), DomainError);
    CHECK_THROWS_AS(AngularSector({{0.0, 10.0}, {5.0, 20.0}}, 3), DomainError);
}

TEST_CASE("sample_spectrum: flat spectrum and layout")
{
    const ArrayGeometry geom(10, 1.0);
    const auto batch = test::scaled_identity_batch(10);
    const auto sol = solve_v(ImplicitSampleCovariance(batch));
    const auto samples = sample_spectrum(kSignal, sol, geom);
    REQUIRE(samples.size() == 10);
    CHECK(samples.delta_theta() == doctest::Approx(deg_to_rad(1.2)));
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        CHECK(samples.powers()[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(max_abs_diff(samples.steering()[i], steering_vector(geom, samples.angles_deg()[i])) == 0.0);
    }
}

TEST_CASE("spectrum samples: validation")
{
    const ArrayGeometry geom(4, 1.0);
    CHECK_THROWS_AS(make_samples(geom, {}, {}, 1.0), DomainError);
    CHECK_THROWS_AS(make_samples(geom, {0.0}, {0.0}, 1.0), DomainError);
    CHECK_THROWS_AS(make_samples(geom, {0.0}, {1.0}, 0.0), DomainError);
    CHECK_THROWS_AS(SpectrumSamples({0.0, 1.0}, {1.0}, {steering_vector(geom, 0.0)}, 1.0), DomainError);
}

TEST_CASE("reconstruct_sv: examples")
{
    const ArrayGeometry geom(6, 1.0);
    const auto abar = steering_vector(geom, 12.0);
    const auto single = make_samples(geom, {12.0}, {1.0}, 1.0);
    CHECK(max_abs_diff(reconstruct_sv(single, abar), abar) < 1e-13);

    // a(0) = [1, 1] is orthogonal to [1, -1]
    const ArrayGeometry two(2, 1.0);
    const auto ortho = make_samples(two, {0.0}, {1.0}, 1.0);
    CHECK_THROWS_AS(reconstruct_sv(ortho, ComplexVector{1.0, -1.0}), DegenerateInputError);
    CHECK_THROWS_AS(reconstruct_sv(ortho, ComplexVector{0.0, 0.0}), DomainError);
}

TEST_CASE("reconstruct_sv: recovers the true direction from a nominal offset")
{
    const ArrayGeometry geom;
    const auto a_true = steering_vector(geom, 5.0);
    const auto abar = steering_vector(geom, 3.0);
    std::vector<double> sims;
    for (int run = 0; run < 30; ++run)
    {
        const auto batch = scenario_batch(900 + static_cast<std::uint64_t>(run));
        const auto sol = solve_v(ImplicitSampleCovariance(batch));
        const auto a_hat = reconstruct_sv(sample_spectrum(kSignal, sol, geom), abar);
        CHECK(norm_squared(a_hat) == doctest::Approx(10.0).epsilon(1e-12));
        sims.push_back(cosine_similarity(a_hat, a_true));

        // oracle: explicit R_s times abar
        const DenseHermitian Rs = dense_from_spectrum(sample_spectrum(kSignal, sol, geom));
        CHECK(cosine_similarity(a_hat, Rs.apply(abar)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    std::nth_element(sims.begin(), sims.begin() + 15, sims.end());
    CHECK(sims[15] > 0.99);
    CHECK(sims[15] > cosine_similarity(abar, a_true));
}

TEST_CASE("reconstruct_sv: direction invariant to power scale")
{
    const ArrayGeometry geom;
    const auto batch = scenario_batch(31);
    const auto sol = solve_v(ImplicitSampleCovariance(batch));
    const auto samples = sample_spectrum(kSignal, sol, geom);
    const auto abar = steering_vector(geom, 4.0);
    const auto a1 = reconstruct_sv(samples, abar);
    const auto a2 = reconstruct_sv(samples.rescaled(37.5), abar);
    CHECK(relative_error(a2, a1) < 1e-12);
}

TEST_CASE("npic_matvec: examples and properties")
{
    const ArrayGeometry geom(10, 1.0);
    const auto a1 = steering_vector(geom, 33.0);
    const auto one = make_samples(geom, {33.0}, {1.0}, 1.0);
    CHECK(max_abs_diff(npic_matvec(one, a1), scaled(10.0, a1)) < 1e-13);
    CHECK(norm(npic_matvec(one, ComplexVector(10))) == 0.0);
    CHECK_THROWS_AS(npic_matvec(one, ComplexVector(9)), DomainError);

    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto samples = scenario_npic_samples(40 + static_cast<std::uint64_t>(trial));
        const auto w1 = random_vector(rng, 10), w2 = random_vector(rng, 10);
        CHECK(relative_error(npic_matvec(samples, w1), dense_from_spectrum(samples).apply(w1)) < 1e-12);

        ComplexVector combo = w2;
        axpy(cplx{2.0, 0.5}, w1, combo);
        ComplexVector expected = npic_matvec(samples, w2);
        axpy(cplx{2.0, 0.5}, npic_matvec(samples, w1), expected);
        CHECK(relative_error(npic_matvec(samples, combo), expected) < 1e-12);

        const cplx q = dot(w1, npic_matvec(samples, w1));
        CHECK(q.real() > 0.0);
        CHECK(std::abs(q.imag()) < 1e-12 * q.real());
        CHECK(samples.trace() == doctest::Approx(dense_from_spectrum(samples).entries().trace().real()));
    }
}

TEST_CASE("gradient: examples")
{
    const ArrayGeometry geom(10, 1.0);
    const auto a1 = steering_vector(geom, 33.0);
    const auto one = make_samples(geom, {33.0}, {1.0}, 1.0);
    Rng rng(5);
    const auto a_hat = random_vector(rng, 10);
    CHECK(max_abs_diff(gradient(one, ComplexVector(10), 1.0, a_hat), a_hat) < 1e-15);
    CHECK(max_abs_diff(gradient(one, a1, 0.0, a_hat), scaled(20.0, a1)) < 1e-12);
}

TEST_CASE("gradient: central differences of the Lagrangian")
{
    const ArrayGeometry geom;
    Rng rng(8);
    const double h = 1e-6;
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto samples = scenario_npic_samples(70 + static_cast<std::uint64_t>(trial));
        const auto a_hat = random_vector(rng, 10);
        auto w = random_vector(rng, 10);
        const double alpha = -1.3;
        ComplexVector fd(10);
        for (std::size_t m = 0; m < 10; ++m)
            for (const cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}})
            {
                const cplx keep = w[m];
                w[m] = keep + h * dir;
                const double up = lagrangian_cost(samples, w, alpha, a_hat);
                w[m] = keep - h * dir;
                const double down = lagrangian_cost(samples, w, alpha, a_hat);
                w[m] = keep;
                fd[m] += dir * (up - down) / (2.0 * h);
            }
        CHECK(relative_error(gradient(samples, w, alpha, a_hat), fd) < 1e-5);
    }
}

TEST_CASE("solve_beamformer: isotropic covariance")
{
    const ArrayGeometry geom(8, 1.0);
    const auto samples = isotropic_samples(geom, 2.0, 0.1);
    Rng rng(3);
    const auto a_hat = random_vector(rng, 8);
    const auto res = solve_beamformer(samples, a_hat);
    CHECK(res.converged);
    CHECK(res.iterations_used == 1);
    CHECK(std::abs(dot(res.weights, a_hat) - 1.0) < 1e-10);
    CHECK(relative_error(res.weights, scaled(1.0 / norm_squared(a_hat), a_hat)) < 1e-12);
}

TEST_CASE("solve_beamformer: dense MVDR agreement and distortionless constraint")
{
    const ArrayGeometry geom;
    const auto a_hat = steering_vector(geom, 5.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto samples = scenario_npic_samples(80 + static_cast<std::uint64_t>(trial));
        const auto res = solve_beamformer(samples, a_hat, {1e-6, 20});
        CHECK(res.converged);
        CHECK(res.final_gradient_norm <= 1e-6);
        CHECK(std::abs(dot(res.weights, res.estimated_sv) - 1.0) < 1e-10);
        CHECK(relative_error(res.weights, mvdr_weights(dense_from_spectrum(samples), a_hat)) < 1e-4);
    }
}

TEST_CASE("solve_beamformer: CG terminates within M iterations")
{
    // orthogonal steering set with moderately spread powers: finite termination
    // is visible in double precision
    const ArrayGeometry geom;
    Rng rng(41);
    std::vector<double> angles, powers;
    for (int k = 0; k < 10; ++k)
    {
        angles.push_back(rad_to_deg(std::asin(-1.0 + 2.0 * k / 10.0)));
        powers.push_back(std::uniform_real_distribution<double>(1.0, 20.0)(rng));
    }
    const auto samples = make_samples(geom, angles, powers, 0.05);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto a_hat = random_vector(rng, 10);
        const auto res = solve_beamformer(samples, a_hat, {0.0, 10});
        CHECK(res.iterations_used == 10);
        CHECK(res.final_gradient_norm < 1e-8);
        CHECK(relative_error(res.weights, mvdr_weights(dense_from_spectrum(samples), a_hat)) < 1e-8);
    }

    // reconstructed interference operators lose conjugacy in floating point a
    // little earlier; two sweeps of M still reach the dense answer
    const auto a5 = steering_vector(geom, 5.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto reconstructed = scenario_npic_samples(120 + static_cast<std::uint64_t>(trial));
        const auto res = solve_beamformer(reconstructed, a5, {1e-10, 20});
        CHECK(res.converged);
        CHECK(relative_error(res.weights, mvdr_weights(dense_from_spectrum(reconstructed), a5)) < 1e-8);
    }
}

TEST_CASE("solve_beamformer: nulls on strong spectral peaks")
{
    // floor of 1 on the complement grid, 40 dB peaks on the samples nearest 20 and 50 degrees
    const ArrayGeometry geom;
    const auto angles = kComplement.sample_angles();
    std::vector<double> powers(angles.size(), 1.0);
    std::vector<double> peaks;
    for (double target : {20.0, 50.0})
    {
        const auto it = std::min_element(angles.begin(), angles.end(), [&](double x, double y)
                                         { return std::abs(x - target) < std::abs(y - target); });
        powers[static_cast<std::size_t>(it - angles.begin())] = 1e4;
        peaks.push_back(*it);
    }
    const auto samples = make_samples(geom, angles, powers, kComplement.spacing_rad());
    const auto a_hat = steering_vector(geom, 5.0);
    for (const BeamformerOptions opt : {BeamformerOptions{}, BeamformerOptions{1e-6, 20}})
    {
        const auto res = solve_beamformer(samples, a_hat, opt);
        const double main = std::norm(dot(res.weights, a_hat));
        for (double p : peaks)
        {
            const double depth = 10.0 * std::log10(main / std::norm(dot(res.weights, steering_vector(geom, p))));
            INFO("peak " << p << " iterations " << res.iterations_used);
            CHECK(depth >= 40.0);
        }
    }
}

TEST_CASE("solve_beamformer: weights invariant to power scale")
{
    const auto samples = scenario_npic_samples(150);
    const auto a_hat = steering_vector(ArrayGeometry(), 5.0);
    const auto w1 = solve_beamformer(samples, a_hat, {1e-10, 50}).weights;
    const auto w2 = solve_beamformer(samples.rescaled(1e3), a_hat, {1e-10, 50}).weights;
    CHECK(relative_error(w2, w1) < 1e-8);
}

TEST_CASE("solve_beamformer: iteration cap and argument checks")
{
    const auto samples = scenario_npic_samples(160);
    const auto a_hat = steering_vector(ArrayGeometry(), 5.0);
    const auto res = solve_beamformer(samples, a_hat, {1e-12, 2});
    CHECK_FALSE(res.converged);
    CHECK(res.iterations_used == 2);
    CHECK(std::abs(dot(res.weights, a_hat) - 1.0) < 1e-10);

    CHECK_THROWS_AS(solve_beamformer(samples, a_hat, {-1.0, 7}), DomainError);
    CHECK_THROWS_AS(solve_beamformer(samples, a_hat, {1e-3, 0}), DomainError);
    CHECK_THROWS_AS(solve_beamformer(samples, ComplexVector(10), {}), DomainError);
    CHECK_THROWS_AS(solve_beamformer(samples, ComplexVector(9, 1.0), {}), DomainError);

    BeamformerOptions fixed;
    fixed.flavor = BeamformerSolver::fixed_step;
    fixed.max_iter = 3;
    const auto slow = solve_beamformer(samples, a_hat, fixed);
    CHECK(slow.iterations_used == 3);
    CHECK(std::abs(dot(slow.weights, a_hat) - 1.0) < 1e-10);
}

TEST_CASE("meps_npic_cg: pipeline matches the dense reference")
{
    MepsNpicCgConfig cfg{ArrayGeometry(), kSignal, kComplement, 5.0, 0.0, {}, {1e-10, 50}};
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto batch = scenario_batch(170 + static_cast<std::uint64_t>(trial));
        const auto out = meps_npic_cg(batch, cfg);
        CHECK(out.meps_converged);

        // dense: explicit inverse column, explicit R_s and R_in
        const DenseHermitian R = dense_sample_covariance(batch);
        const auto v = solve_dense(R, unit_vector(10, 0));
        const auto sol = make_meps_solution(v, 0, 0.0);
        const auto Rs = dense_from_spectrum(sample_spectrum(kSignal, sol, cfg.geometry));
        auto a_hat = Rs.apply(steering_vector(cfg.geometry, 5.0));
        scale(std::sqrt(10.0) / norm(a_hat), a_hat);
        const auto w = mvdr_weights(dense_from_spectrum(sample_spectrum(kComplement, sol, cfg.geometry)), a_hat);

        CHECK(relative_error(out.beamformer.estimated_sv, a_hat) < 1e-6);
        CHECK(relative_error(out.beamformer.weights, w) < 1e-4);
    }
}
