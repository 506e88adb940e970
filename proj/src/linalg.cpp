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

#include "beamsim/linalg.hpp"
#include "beamsim/errors.hpp"

#include <cmath>
#include <string>

namespace beamsim
{
    cplx dot(ConstVectorView x, ConstVectorView y)
    {
        require_same_size(x.size(), y.size(), "dot");
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            // conj(x) * y, expanded to avoid the complex multiply overhead
            const double xr = x[i].real(), xi = x[i].imag();
            const double yr = y[i].real(), yi = y[i].imag();
            re += xr * yr + xi * yi;
            im += xr * yi - xi * yr;
        }
        return {re, im};
    }

    double norm_squared(ConstVectorView x)
    {
        double s = 0.0;
        for (const auto &v : x)
            s += std::norm(v);
        return s;
    }

    double norm(ConstVectorView x) { return std::sqrt(norm_squared(x)); }

    void axpy(cplx alpha, ConstVectorView x, VectorView y)
    {
        require_same_size(y.size(), x.size(), "axpy");
        const double ar = alpha.real(), ai = alpha.imag();
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double xr = x[i].real(), xi = x[i].imag();
            y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
        }
    }

    void scale(cplx alpha, VectorView x)
    {
        const double ar = alpha.real(), ai = alpha.imag();
        for (auto &v : x)
            v = {ar * v.real() - ai * v.imag(), ar * v.imag() + ai * v.real()};
    }

    ComplexVector scaled(cplx alpha, ConstVectorView x)
    {
        ComplexVector out(x.begin(), x.end());
        scale(alpha, out);
        return out;
    }

    ComplexVector unit_vector(std::size_t n, std::size_t k)
    {
        if (k >= n)
            throw DomainError("unit_vector: index " + std::to_string(k) + " out of range for length " + std::to_string(n));
        ComplexVector e(n, cplx{0.0, 0.0});
        e[k] = 1.0;
        return e;
    }

    double relative_error(ConstVectorView x, ConstVectorView y)
    {
        require_same_size(y.size(), x.size(), "relative_error");
        double diff = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            diff += std::norm(x[i] - y[i]);
        const double ref = norm_squared(y);
        return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
    }

    double cosine_similarity(ConstVectorView x, ConstVectorView y)
    {
        const double denom = norm(x) * norm(y);
        if (denom == 0.0)
            throw DegenerateInputError("cosine_similarity: zero vector");
        return std::abs(dot(x, y)) / denom;
    }

    void require_same_size(std::size_t expected, std::size_t actual, const char *what)
    {
        if (expected != actual)
            throw DomainError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual) + ")");
    }
}
