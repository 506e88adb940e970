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

// Oracle-equivalence checks: every matrix-free operation against the dense
// reference path on randomized inputs. Shared by `beamsim validate` and the
// acceptance suite.

#ifndef BEAMSIM_VALIDATION_HPP
#define BEAMSIM_VALIDATION_HPP

#include "beamsim/array_model.hpp"
#include "beamsim/npic_cg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace beamsim
{
    struct CheckResult
    {
        std::string name;
        bool passed = false;
        double worst = 0.0;     // worst observed value of the checked quantity
        double threshold = 0.0;
        double seconds = 0.0;
        std::string detail;
    };

    // Random M-sensor scenario batch: desired plus 1-3 interferers at random
    // DoAs and powers, unit noise.
    SnapshotBatch random_batch(Rng &rng, int M, int K);

    // Powers log-uniform over [1e-1, 1e3] on the default complement grid.
    SpectrumSamples random_spectrum_samples(Rng &rng, const ArrayGeometry &geom, int Q);

    // Complex Gaussian vector rescaled to ||a||^2 = M.
    ComplexVector random_steering_estimate(Rng &rng, int M);

    // meps_power via solve_v vs dense inversion at 181 angles; relative error < 1e-6
    CheckResult check_spectrum_equivalence(std::uint64_t seed, int trials = 100);

    // solve_beamformer (tol 1e-6, 20 iterations) vs dense MVDR; weights < 1e-4, SINR < 0.01 dB
    CheckResult check_beamformer_equivalence(std::uint64_t seed, int trials = 100);

    // analytic gradient vs central differences over 2M real coordinates; < 1e-5
    CheckResult check_gradient(std::uint64_t seed, int trials = 20);

    // xi lambda_max <= 1 and monotone fixed-step residual over 200 iterations
    CheckResult check_step_size(std::uint64_t seed, int trials = 100);

    // npic_matvec vs dense reconstructed matrix on Q=90 samples; < 1e-12
    CheckResult check_npic_matvec(std::uint64_t seed, int trials = 100);

    std::vector<CheckResult> run_oracle_checks(std::uint64_t seed);
}

#endif
