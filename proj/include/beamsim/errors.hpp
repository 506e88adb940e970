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

#ifndef BEAMSIM_ERRORS_HPP
#define BEAMSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace beamsim
{
    // Invalid argument: out-of-range angle, dimension mismatch, bad config value.
    class DomainError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Input is well-formed but numerically degenerate (all-zero batch, a^H v = 0, ...).
    class DegenerateInputError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // A direct or iterative solve met a non-positive pivot / curvature.
    class SingularityError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Iterative solver stopped without reaching its tolerance.
    class ConvergenceError : public std::runtime_error
    {
    public:
        ConvergenceError(const std::string &what, double residual_norm, int iterations)
            : std::runtime_error(what), residual_norm_(residual_norm), iterations_(iterations) {}

        double residual_norm() const noexcept { return residual_norm_; }
        int iterations() const noexcept { return iterations_; }

    private:
        double residual_norm_;
        int iterations_;
    };
}

#endif
