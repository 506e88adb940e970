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
#include "test_helpers.hpp"

#include <cmath>

using namespace beamsim;
using beamsim::test::max_abs_diff;
using beamsim::test::random_vector;

namespace
{
    TruthModel scenario_truth(double snr_db = 20.0)
    {
        const ArrayGeometry geom;
        ScenarioTruth t;
        t.desired.push_back({5.0, steering_vector(geom, 5.0), std::pow(10.0, snr_db / 10.0)});
        for (double doa : {20.0, 50.0})
            t.interference.push_back({doa, steering_vector(geom, doa), 1000.0});
        return TruthModel::from_scenario(t, 10);
    }

    TruthModel noise_only_truth(const ComplexVector &sv, double power)
    {
        ScenarioTruth t;
        t.desired.push_back({0.0, sv, power});
        return TruthModel::from_scenario(t, static_cast<int>(sv.size()));
    }

    Eigen::MatrixXcd random_pd(Rng &rng, int M)
    {
        Eigen::MatrixXcd B(M, M);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                B(i, j) = complex_gaussian(rng, 1.0);
        return B * B.adjoint() + 0.1 * Eigen::MatrixXcd::Identity(M, M);
    }
}

TEST_CASE("dense_from_spectrum: single term and Toeplitz structure")
{
    const ArrayGeometry geom(6, 1.0);
    const auto a = steering_vector(geom, 25.0);
    const SpectrumSamples one({25.0}, {1.0}, {a}, 1.0);
    const Eigen::VectorXcd ae = to_eigen(a);
    CHECK((dense_from_spectrum(one).entries() - ae * ae.adjoint()).norm() < 1e-13);

    // flat unit spectrum on a dense grid over [-90, 90]
    const AngularSector full({{-90.0, 90.0}}, 3600);
    std::vector<double> angles = full.sample_angles();
    std::vector<ComplexVector> steering;
    for (double th : angles)
        steering.push_back(steering_vector(geom, th));
    const auto R = dense_from_spectrum(
        SpectrumSamples(angles, std::vector<double>(angles.size(), 1.0), steering, full.spacing_rad()))
                       .entries();
    for (int i = 0; i < 6; ++i)
    {
        CHECK(R(i, i).real() == doctest::Approx(kPi).epsilon(1e-9)); // integral of 1 over pi rad
        for (int j = 0; j + 1 < 6 && i + 1 < 6; ++j)
            CHECK(std::abs(R(i + 1, j + 1) - R(i, j)) < 1e-9);
    }
}

TEST_CASE("dense_from_spectrum: agrees with npic_matvec")
{
    const ArrayGeometry geom;
    const AngularSector comp({{-90.0, -1.0}, {11.0, 90.0}}, 90);
    Rng rng(4);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto batch = generate_snapshots(geom, {5.0, 20.0}, {{20.0, 30.0}, {50.0, 30.0}}, NoMismatch{}, 30, rng).batch;
        const auto samples = sample_spectrum(comp, solve_v(ImplicitSampleCovariance(batch)), geom);
        const auto w = random_vector(rng, 10);
        CHECK(relative_error(dense_from_spectrum(samples).apply(w), npic_matvec(samples, w)) < 1e-12);
    }
}

TEST_CASE("DenseHermitian: construction and spectra")
{
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(DenseHermitian{bad}, DomainError);
    CHECK_THROWS_AS(DenseHermitian{Eigen::MatrixXcd(2, 3)}, DomainError);

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d.diagonal() << 3.0, 1.0, 2.0;
    const DenseHermitian D{d};
    CHECK(D.lambda_max() == doctest::Approx(3.0));
    CHECK(D.lambda_min() == doctest::Approx(1.0));
    CHECK(D.plus_identity(2.0).lambda_min() == doctest::Approx(3.0));
    CHECK(DenseHermitian::identity(4).entries().isIdentity());
}

TEST_CASE("solve_dense: examples")
{
    Rng rng(1);
    const auto b = random_vector(rng, 5);
    CHECK(max_abs_diff(solve_dense(DenseHermitian::identity(5), b), b) < 1e-15);

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d.diagonal() << 2.0, 1.0;
    const auto x = solve_dense(DenseHermitian{d}, unit_vector(2, 0));
    CHECK(std::abs(x[0] - 0.5) < 1e-15);
    CHECK(std::abs(x[1]) < 1e-15);

    for (int trial = 0; trial < 20; ++trial)
    {
        const DenseHermitian A{random_pd(rng, 8)};
        const auto rhs = random_vector(rng, 8);
        const auto sol = solve_dense(A, rhs);
        ComplexVector r = rhs;
        axpy(-1.0, A.apply(sol), r);
        CHECK(norm(r) <= 1e-10 * norm(rhs));
    }

    Eigen::MatrixXcd singular = Eigen::MatrixXcd::Zero(3, 3);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_dense(DenseHermitian{singular}, unit_vector(3, 0)), SingularityError);
    Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(solve_dense(DenseHermitian{indefinite}, unit_vector(2, 0)), SingularityError);
}

TEST_CASE("mvdr_weights: examples")
{
    const ArrayGeometry geom;
    const auto a0 = steering_vector(geom, 5.0);
    const auto w = mvdr_weights(DenseHermitian::identity(10), a0);
    CHECK(max_abs_diff(w, scaled(0.1, a0)) < 1e-15);

    const TruthModel truth = scenario_truth();
    const auto wo = mvdr_weights(truth.true_npic, a0);
    CHECK(std::abs(dot(wo, a0) - 1.0) < 1e-12);
    CHECK(std::abs(output_sinr(wo, truth) - optimal_sinr_db(truth)) < 0.5);

    const auto ws = mvdr_weights(truth.true_npic, scaled(3.0, a0));
    CHECK(relative_error(ws, scaled(1.0 / 3.0, wo)) < 1e-12);
    CHECK(output_sinr(ws, truth) == doctest::Approx(output_sinr(wo, truth)).epsilon(1e-12));
}

TEST_CASE("smi_weights: examples")
{
    const ArrayGeometry geom;
    const auto a0 = steering_vector(geom, 5.0);
    Rng rng(2);
    const auto noise = generate_snapshots(geom, {0.0, -400.0}, {}, NoMismatch{}, 100000, rng).batch;
    CHECK(relative_error(smi_weights(noise, a0, 0.0), scaled(0.1, a0)) < 0.02);

    const auto few = generate_snapshots(geom, {0.0, -400.0}, {}, NoMismatch{}, 5, rng).batch;
    CHECK_THROWS_AS(smi_weights(few, a0, 0.0), SingularityError);
    CHECK_NOTHROW(smi_weights(few, a0, 10.0));

    const TruthModel truth = scenario_truth();
    const auto gen = generate_snapshots(geom, {5.0, 20.0}, {{20.0, 30.0}, {50.0, 30.0}}, NoMismatch{}, 30, rng);
    const double loaded = output_sinr(smi_weights(gen.batch, a0, 10.0), truth);
    CHECK(std::isfinite(loaded));
    CHECK(loaded < optimal_sinr_db(truth));
}

TEST_CASE("output_sinr: closed forms and invariances")
{
    const ArrayGeometry geom;
    const auto a0 = steering_vector(geom, 5.0);
    const TruthModel noise = noise_only_truth(a0, 1.0);
    CHECK(output_sinr(scaled(0.1, a0), noise) == doctest::Approx(10.0).epsilon(1e-12));

    const TruthModel truth = scenario_truth();
    const double opt = optimal_sinr_db(truth);
    CHECK(output_sinr(mvdr_weights(truth.true_npic, a0), truth) == doctest::Approx(opt).epsilon(1e-12));
    // desired at 20 dB, both interferers well separated: slightly below 20 + 10log10(M)
    CHECK(opt > 29.5);
    CHECK(opt < 30.0);

    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto w = random_vector(rng, 10);
        const double s = output_sinr(w, truth);
        CHECK(output_sinr(scaled(cplx{-2.0, 0.7}, w), truth) == doctest::Approx(s).epsilon(1e-12));
        CHECK(s <= opt + 1e-9);
    }
    CHECK_THROWS_AS(output_sinr(ComplexVector(10), truth), DomainError);
}

TEST_CASE("optimal weights: multipath desired signal")
{
    const ArrayGeometry geom;
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto gen = generate_snapshots(geom, {5.0, 20.0}, {{20.0, 30.0}, {50.0, 30.0}}, IncoherentScattering{},
                                            30, rng);
        const TruthModel truth = TruthModel::from_scenario(gen.truth, 10);
        REQUIRE(truth.desired.size() == 5);
        CHECK(truth.desired_power == doctest::Approx(100.0));
        const double opt = optimal_sinr_db(truth);
        // no weight beats the principal generalized eigenvector
        for (int k = 0; k < 20; ++k)
            CHECK(output_sinr(random_vector(rng, 10), truth) <= opt + 1e-9);
        CHECK(output_sinr(mvdr_weights(truth.true_npic, steering_vector(geom, 5.0)), truth) <= opt + 1e-9);
    }
}

TEST_CASE("dense_meps_power matches the identity closed form")
{
    const ArrayGeometry geom(5, 1.0);
    Eigen::MatrixXcd four = 4.0 * Eigen::MatrixXcd::Identity(5, 5);
    for (double th : {-60.0, 0.0, 35.0})
        CHECK(dense_meps_power(DenseHermitian{four}, steering_vector(geom, th)) == doctest::Approx(4.0));
}
