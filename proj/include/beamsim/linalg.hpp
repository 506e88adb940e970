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

// Length-M complex vector kernels used by the matrix-free solve path.
// Everything here is O(M); nothing allocates more than one vector.

#ifndef BEAMSIM_LINALG_HPP
#define BEAMSIM_LINALG_HPP

#include <complex>
#include <span>
#include <vector>

namespace beamsim
{
    using cplx = std::complex<double>;
    using ComplexVector = std::vector<cplx>;
    using ConstVectorView = std::span<const cplx>;
    using VectorView = std::span<cplx>;

    inline constexpr double kPi = 3.14159265358979323846;

    inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

    // x^H y (conjugates the first argument)
    cplx dot(ConstVectorView x, ConstVectorView y);

    double norm_squared(ConstVectorView x);
    double norm(ConstVectorView x);

    // y += alpha * x
    void axpy(cplx alpha, ConstVectorView x, VectorView y);

    void scale(cplx alpha, VectorView x);

    ComplexVector scaled(cplx alpha, ConstVectorView x);

    // e_k of length n (0-based k)
    ComplexVector unit_vector(std::size_t n, std::size_t k);

    // ||x - y|| / ||y||; returns ||x|| when y = 0
    double relative_error(ConstVectorView x, ConstVectorView y);

    // |x^H y| / (||x|| ||y||)
    double cosine_similarity(ConstVectorView x, ConstVectorView y);

    void require_same_size(std::size_t expected, std::size_t actual, const char *what);
}

#endif
