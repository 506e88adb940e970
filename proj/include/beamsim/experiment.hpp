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

// Monte Carlo experiment harness: scenario configuration, seeded paired runs
// over SNR and snapshot-count sweeps, CSV output and summary statistics.

#ifndef BEAMSIM_EXPERIMENT_HPP
#define BEAMSIM_EXPERIMENT_HPP

#include "beamsim/array_model.hpp"
#include "beamsim/npic_cg.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace beamsim
{
    inline const char *const kMethodMepsNpicCg = "meps-npic-cg";
    inline const char *const kMethodOptimal = "optimal";
    inline const char *const kMethodSmi = "smi";
    inline const char *const kMethodSmiLoaded = "smi-loaded";

    struct ScenarioConfig
    {
        std::string scenario = "none";
        ArrayGeometry geometry{10, 1.0};
        SourceSpec desired{5.0, 20.0}; // power_db is the SNR for the snapshot sweep and spectrum
        std::vector<SourceSpec> interferers{{20.0, 30.0}, {50.0, 30.0}};
        MismatchModel mismatch = NoMismatch{};
        AngularSector signal_sector{{{-1.0, 11.0}}, 10};
        AngularSector complement_sector{{{-90.0, -1.0}, {11.0, 90.0}}, 90};
        int snapshots = 30;
        std::vector<double> snr_sweep{-10, -5, 0, 5, 10, 15, 20, 25, 30};
        std::vector<int> snapshot_sweep{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
        int runs = 100;
        double tol = 1e-3;
        int max_iter = 7;
        std::uint64_t base_seed = 20260101;
        std::vector<std::string> methods{kMethodMepsNpicCg, kMethodOptimal, kMethodSmi, kMethodSmiLoaded};

        double smi_loading = 10.0;  // times the unit noise power
        double meps_tol = 1e-8;
        int meps_max_iter = 500;
        bool paper_faithful = false; // fixed-step recursions for both solvers
        int paper_faithful_meps_max_iter = 20000;
        int threads = 0; // 0: BEAMSIM_THREADS or hardware concurrency

        // Human-readable problems that do not prevent running (sector overlap,
        // sources outside their sectors).
        std::vector<std::string> warnings() const;

        // Matrix-free solver settings derived from this scenario.
        MepsNpicCgConfig solver_config() const;
    };

    ScenarioConfig config_from_json(const nlohmann::json &j);
    nlohmann::json config_to_json(const ScenarioConfig &cfg);
    ScenarioConfig load_config(const std::filesystem::path &path);

    struct SinrRecord
    {
        std::string scenario;
        std::string method;
        double snr_db = 0.0;
        int snapshots = 0;
        int run_index = 0;
        double sinr_db = 0.0; // NaN when the method could not produce weights
        bool converged = false;

        bool operator==(const SinrRecord &) const = default;
    };

    // Stable mix of (base_seed, snr, K, run); identical inputs give identical seeds.
    std::uint64_t run_seed(std::uint64_t base_seed, double snr_db, int num_snapshots, int run_index);

    std::vector<SinrRecord> run_single(const ScenarioConfig &cfg, double snr_db, int num_snapshots, int run_index);

    // snr_sweep x runs at K = cfg.snapshots
    std::vector<SinrRecord> sweep_snr(const ScenarioConfig &cfg);

    // snapshot_sweep x runs at SNR = cfg.desired.power_db
    std::vector<SinrRecord> sweep_snapshots(const ScenarioConfig &cfg);

    void emit_csv(const std::vector<SinrRecord> &records, const std::filesystem::path &path);
    void write_csv(const std::vector<SinrRecord> &records, std::ostream &out);
    std::vector<SinrRecord> read_csv(const std::filesystem::path &path);

    struct SweepPointSummary
    {
        std::string scenario;
        std::string method;
        double snr_db = 0.0;
        int snapshots = 0;
        int count = 0;     // finite SINR values
        int failures = 0;  // NaN SINR values
        int converged = 0;
        double mean_sinr_db = 0.0;
        double median_sinr_db = 0.0;
    };

    // One entry per (method, snr, K) in first-appearance order.
    std::vector<SweepPointSummary> summarize(const std::vector<SinrRecord> &records);
    void emit_summary_csv(const std::vector<SweepPointSummary> &summary, const std::filesystem::path &path);

    double median(std::vector<double> values);

    struct SpectrumPoint
    {
        double theta_deg;
        double power_db;
    };

    // MEPS of run 0 at SNR desired.power_db and K = snapshots, on a 1 degree grid.
    std::vector<SpectrumPoint> spectrum_curve(const ScenarioConfig &cfg);
    void emit_spectrum_csv(const std::vector<SpectrumPoint> &curve, const std::filesystem::path &path);

    // BEAMSIM_THREADS if set and positive, else hardware concurrency (>= 1).
    int default_thread_count();
}

#endif
