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

#include "beamsim/experiment.hpp"
#include "beamsim/validation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

namespace
{
    struct CommonOptions
    {
        std::string config_path;
        std::string out_path;
        std::string summary_path;
        std::optional<std::uint64_t> seed;
        bool paper_faithful = false;
    };

    void add_common(CLI::App *cmd, CommonOptions &opt, bool with_summary)
    {
        cmd->add_option("--config", opt.config_path, "JSON scenario file (all keys optional)")->check(CLI::ExistingFile);
        cmd->add_option("--out", opt.out_path, "Output CSV path")->required();
        cmd->add_option("--seed", opt.seed, "Override base_seed");
        cmd->add_flag("--paper-faithful", opt.paper_faithful, "Use the fixed-step recursions for both solvers");
        if (with_summary)
            cmd->add_option("--summary", opt.summary_path, "Also write per-point mean/median SINR here");
    }

    beamsim::ScenarioConfig resolve(const CommonOptions &opt)
    {
        beamsim::ScenarioConfig cfg = opt.config_path.empty() ? beamsim::ScenarioConfig{}
                                                              : beamsim::load_config(opt.config_path);
        if (opt.seed)
            cfg.base_seed = *opt.seed;
        if (opt.paper_faithful)
            cfg.paper_faithful = true;
        for (const auto &w : cfg.warnings())
            std::cerr << "warning: " << w << '\n';
        return cfg;
    }

    void write_sweep(const std::vector<beamsim::SinrRecord> &records, const CommonOptions &opt)
    {
        beamsim::emit_csv(records, opt.out_path);
        if (!opt.summary_path.empty())
            beamsim::emit_summary_csv(beamsim::summarize(records), opt.summary_path);
    }

    int run_validate(std::uint64_t seed)
    {
        bool ok = true;
        for (const auto &r : beamsim::run_oracle_checks(seed))
        {
            std::printf("%-28s %s  worst %.3e  limit %.3e  %.2fs", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.worst,
                        r.threshold, r.seconds);
            if (!r.detail.empty())
                std::printf("  (%s)", r.detail.c_str());
            std::printf("\n");
            ok = ok && r.passed;
        }
        return ok ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Matrix-free robust adaptive beamforming: Monte Carlo sweeps and oracle checks"};
    app.require_subcommand(1);

    CommonOptions snr_opt, snap_opt, spec_opt;
    auto *snr_cmd = app.add_subcommand("sweep-snr", "SINR versus SNR at fixed snapshot count");
    add_common(snr_cmd, snr_opt, true);
    auto *snap_cmd = app.add_subcommand("sweep-snapshots", "SINR versus snapshot count at fixed SNR");
    add_common(snap_cmd, snap_opt, true);
    auto *spec_cmd = app.add_subcommand("spectrum", "MEPS curve of one run on a 1 degree grid");
    add_common(spec_cmd, spec_opt, false);

    std::uint64_t validate_seed = 1;
    auto *val_cmd = app.add_subcommand("validate", "Matrix-free paths against the dense reference");
    val_cmd->add_option("--seed", validate_seed, "Seed for the randomized inputs");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*snr_cmd)
            write_sweep(beamsim::sweep_snr(resolve(snr_opt)), snr_opt);
        else if (*snap_cmd)
            write_sweep(beamsim::sweep_snapshots(resolve(snap_opt)), snap_opt);
        else if (*spec_cmd)
            beamsim::emit_spectrum_csv(beamsim::spectrum_curve(resolve(spec_opt)), spec_opt.out_path);
        else if (*val_cmd)
            return run_validate(validate_seed);
    }
    catch (const std::exception &e)
    {
        std::cerr << "beamsim: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
