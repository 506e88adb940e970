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

#include "beamsim/array_model.hpp"
#include "beamsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace beamsim
{
    namespace
    {
        void check_angle(double theta_deg, const char *what)
        {
            if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
                throw DomainError(std::string(what) + ": angle " + std::to_string(theta_deg) +
                                  " deg outside [-90, 90]");
        }

        double draw_scatter_doa(const IncoherentScattering &model, Rng &rng)
        {
            double doa = model.doa_mean_deg;
            if (model.doa_std_deg > 0.0)
            {
                if (model.distribution == ScatterDistribution::uniform)
                {
                    const double half_width = std::sqrt(3.0) * model.doa_std_deg;
                    std::uniform_real_distribution<double> dist(model.doa_mean_deg - half_width,
                                                                model.doa_mean_deg + half_width);
                    doa = dist(rng);
                }
                else
                {
                    std::normal_distribution<double> dist(model.doa_mean_deg, model.doa_std_deg);
                    doa = dist(rng);
                }
            }
            return std::clamp(doa, -90.0, 90.0);
        }
    }

    ArrayGeometry::ArrayGeometry(int num_sensors, double spacing_ratio)
        : num_sensors_(num_sensors), spacing_ratio_(spacing_ratio)
    {
        if (num_sensors < 2)
            throw DomainError("ArrayGeometry: need at least 2 sensors, got " + std::to_string(num_sensors));
        if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
            throw DomainError("ArrayGeometry: spacing ratio must be positive");
    }

    double SourceSpec::power_linear() const { return std::pow(10.0, power_db / 10.0); }

    void validate(const MismatchModel &mismatch)
    {
        if (const auto *phase = std::get_if<AccumulatedPhase>(&mismatch))
        {
            if (!(phase->std_rad >= 0.0))
                throw DomainError("accumulated_phase: std_rad must be >= 0");
        }
        else if (const auto *scatter = std::get_if<IncoherentScattering>(&mismatch))
        {
            if (scatter->num_paths < 0)
                throw DomainError("incoherent_scattering: num_paths must be >= 0");
            if (!(scatter->doa_std_deg >= 0.0))
                throw DomainError("incoherent_scattering: doa_std_deg must be >= 0");
            check_angle(scatter->doa_mean_deg, "incoherent_scattering");
        }
    }

    SnapshotBatch::SnapshotBatch(int num_sensors, int num_snapshots)
        : SnapshotBatch(num_sensors, num_snapshots,
                        ComplexVector(static_cast<std::size_t>(std::max(num_sensors, 0)) *
                                      static_cast<std::size_t>(std::max(num_snapshots, 0))))
    {
    }

    SnapshotBatch::SnapshotBatch(int num_sensors, int num_snapshots, ComplexVector data)
        : num_sensors_(num_sensors), num_snapshots_(num_snapshots), data_(std::move(data))
    {
        if (num_sensors < 1)
            throw DomainError("SnapshotBatch: need at least one sensor");
        if (num_snapshots < 1)
            throw DomainError("SnapshotBatch: need at least one snapshot (K >= 1)");
        require_same_size(static_cast<std::size_t>(num_sensors) * static_cast<std::size_t>(num_snapshots),
                          data_.size(), "SnapshotBatch");
    }

    ConstVectorView SnapshotBatch::column(int t) const
    {
        return ConstVectorView(data_).subspan(static_cast<std::size_t>(t) * num_sensors_, num_sensors_);
    }

    VectorView SnapshotBatch::column(int t)
    {
        return VectorView(data_).subspan(static_cast<std::size_t>(t) * num_sensors_, num_sensors_);
    }

    void steering_vector_into(const ArrayGeometry &geom, double theta_deg, VectorView out)
    {
        check_angle(theta_deg, "steering_vector");
        require_same_size(static_cast<std::size_t>(geom.num_sensors()), out.size(), "steering_vector");
        const double phase_step = -kPi * geom.spacing_ratio() * std::sin(deg_to_rad(theta_deg));
        out[0] = cplx{1.0, 0.0};
        for (std::size_t m = 1; m < out.size(); ++m)
            out[m] = std::polar(1.0, phase_step * static_cast<double>(m));
    }

    ComplexVector steering_vector(const ArrayGeometry &geom, double theta_deg)
    {
        ComplexVector a(static_cast<std::size_t>(geom.num_sensors()));
        steering_vector_into(geom, theta_deg, a);
        return a;
    }

    cplx complex_gaussian(Rng &rng, double power)
    {
        std::normal_distribution<double> dist(0.0, std::sqrt(power / 2.0));
        const double re = dist(rng);
        const double im = dist(rng);
        return {re, im};
    }

    DesiredSignature effective_desired_sv(const ArrayGeometry &geom, double nominal_doa_deg, double desired_power,
                                          const MismatchModel &mismatch, Rng &rng)
    {
        check_angle(nominal_doa_deg, "effective_desired_sv");
        validate(mismatch);
        DesiredSignature sig;

        if (std::holds_alternative<NoMismatch>(mismatch))
        {
            sig.paths.push_back({nominal_doa_deg, steering_vector(geom, nominal_doa_deg), desired_power});
        }
        else if (const auto *phase = std::get_if<AccumulatedPhase>(&mismatch))
        {
            ComplexVector sv = steering_vector(geom, nominal_doa_deg);
            std::normal_distribution<double> increment(0.0, phase->std_rad);
            double accumulated = 0.0;
            for (std::size_t m = 1; m < sv.size(); ++m)
            {
                if (phase->std_rad > 0.0)
                    accumulated += increment(rng);
                sv[m] *= std::polar(1.0, accumulated);
            }
            sig.paths.push_back({nominal_doa_deg, std::move(sv), desired_power});
        }
        else
        {
            const auto &scatter = std::get<IncoherentScattering>(mismatch);
            const int total_paths = scatter.num_paths + 1;
            const double per_path = desired_power / total_paths;
            // path 0 is the direct arrival at the nominal DoA; the rest are scattered
            for (int p = 0; p < total_paths; ++p)
            {
                const double doa = p == 0 ? nominal_doa_deg : draw_scatter_doa(scatter, rng);
                sig.paths.push_back({doa, steering_vector(geom, doa), per_path});
            }
        }
        return sig;
    }

    GeneratedSnapshots generate_snapshots(const ArrayGeometry &geom, const SourceSpec &desired,
                                          const std::vector<SourceSpec> &interferers, const MismatchModel &mismatch,
                                          int num_snapshots, Rng &rng)
    {
        if (num_snapshots < 1)
            throw DomainError("generate_snapshots: K must be >= 1, got " + std::to_string(num_snapshots));

        ScenarioTruth truth;
        truth.desired = effective_desired_sv(geom, desired.doa_deg, desired.power_linear(), mismatch, rng).paths;
        for (const auto &src : interferers)
        {
            check_angle(src.doa_deg, "generate_snapshots");
            truth.interference.push_back({src.doa_deg, steering_vector(geom, src.doa_deg), src.power_linear()});
        }
        truth.noise_power = 1.0;

        const int M = geom.num_sensors();
        SnapshotBatch batch(M, num_snapshots);
        for (int t = 0; t < num_snapshots; ++t)
        {
            VectorView x = batch.column(t);
            for (const auto &path : truth.desired)
                axpy(complex_gaussian(rng, path.power), path.sv, x);
            for (const auto &path : truth.interference)
                axpy(complex_gaussian(rng, path.power), path.sv, x);
            for (auto &xm : x)
                xm += complex_gaussian(rng, truth.noise_power);
        }
        return {std::move(batch), std::move(truth)};
    }
}
