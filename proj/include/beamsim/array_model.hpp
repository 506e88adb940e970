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

// Uniform linear array model: geometry, steering vectors, snapshot synthesis
// and the two steering-vector mismatch models used by the experiments.

#ifndef BEAMSIM_ARRAY_MODEL_HPP
#define BEAMSIM_ARRAY_MODEL_HPP

#include "beamsim/linalg.hpp"

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace beamsim
{
    using Rng = std::mt19937_64;

    // M sensors with normalized spacing 2d/lambda (1 = half-wavelength).
    class ArrayGeometry
    {
    public:
        explicit ArrayGeometry(int num_sensors = 10, double spacing_ratio = 1.0);

        int num_sensors() const noexcept { return num_sensors_; }
        double spacing_ratio() const noexcept { return spacing_ratio_; }

    private:
        int num_sensors_;
        double spacing_ratio_;
    };

    struct SourceSpec
    {
        double doa_deg = 0.0;
        double power_db = 0.0; // relative to unit noise power per sensor

        double power_linear() const;
    };

    struct NoMismatch
    {
    };

    // Per-element phase error accumulated along the array (random walk, radians).
    struct AccumulatedPhase
    {
        double std_rad = 0.07;
    };

    enum class ScatterDistribution
    {
        uniform,  // uniform with the requested mean and standard deviation
        gaussian,
    };

    // Desired signal arrives directly from the nominal DoA plus num_paths scattered
    // directions drawn around doa_mean_deg; every path has its own complex gain
    // redrawn every snapshot.
    struct IncoherentScattering
    {
        int num_paths = 4;
        double doa_mean_deg = 5.0;
        double doa_std_deg = 2.0;
        ScatterDistribution distribution = ScatterDistribution::uniform;
    };

    using MismatchModel = std::variant<NoMismatch, AccumulatedPhase, IncoherentScattering>;

    void validate(const MismatchModel &mismatch);

    // One propagation path: a fixed spatial signature with a zero-mean circular
    // Gaussian waveform of the given power. doa_deg is informational.
    struct PathComponent
    {
        double doa_deg = 0.0;
        ComplexVector sv;
        double power = 0.0;
    };

    // Desired signal signature for one Monte Carlo run. Each path carries a
    // fraction of the total desired power; gains are independent per path
    // and per snapshot.
    struct DesiredSignature
    {
        std::vector<PathComponent> paths;
    };

    // M x K observations, column-major: column t is x(t).
    class SnapshotBatch
    {
    public:
        SnapshotBatch(int num_sensors, int num_snapshots);
        SnapshotBatch(int num_sensors, int num_snapshots, ComplexVector data);

        int num_sensors() const noexcept { return num_sensors_; }
        int num_snapshots() const noexcept { return num_snapshots_; }

        ConstVectorView column(int t) const;
        VectorView column(int t);

        const ComplexVector &data() const noexcept { return data_; }

    private:
        int num_sensors_;
        int num_snapshots_;
        ComplexVector data_;
    };

    // What the generator knows about the run, needed by the SINR metric.
    struct ScenarioTruth
    {
        std::vector<PathComponent> desired;
        std::vector<PathComponent> interference;
        double noise_power = 1.0;
    };

    struct GeneratedSnapshots
    {
        SnapshotBatch batch;
        ScenarioTruth truth;
    };

    // a(theta)[m] = exp(-j pi m dbar sin(theta)), m = 0..M-1
    ComplexVector steering_vector(const ArrayGeometry &geom, double theta_deg);

    // Writes a(theta) into out (size M) without allocating.
    void steering_vector_into(const ArrayGeometry &geom, double theta_deg, VectorView out);

    DesiredSignature effective_desired_sv(const ArrayGeometry &geom, double nominal_doa_deg, double desired_power,
                                          const MismatchModel &mismatch, Rng &rng);

    GeneratedSnapshots generate_snapshots(const ArrayGeometry &geom, const SourceSpec &desired,
                                          const std::vector<SourceSpec> &interferers, const MismatchModel &mismatch,
                                          int num_snapshots, Rng &rng);

    // Draw from CN(0, power)
    cplx complex_gaussian(Rng &rng, double power);
}

#endif
