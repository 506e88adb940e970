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
#include "beamsim/baselines.hpp"
#include "beamsim/covariance.hpp"
#include "beamsim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace beamsim
{
    using json = nlohmann::json;

    // ---------------------------------------------------------------- config

    namespace
    {
        const std::set<std::string> kKnownMethods{kMethodMepsNpicCg, kMethodOptimal, kMethodSmi, kMethodSmiLoaded};

        void reject_unknown_keys(const json &j, const std::set<std::string> &allowed, const std::string &where)
        {
            for (const auto &[key, value] : j.items())
                if (!allowed.count(key))
                    throw DomainError("config: unknown key '" + key + "' in " + where);
        }

        SourceSpec source_from_json(const json &j, SourceSpec fallback)
        {
            reject_unknown_keys(j, {"doa_deg", "power_db"}, "source");
            fallback.doa_deg = j.value("doa_deg", fallback.doa_deg);
            fallback.power_db = j.value("power_db", fallback.power_db);
            if (!(fallback.doa_deg >= -90.0 && fallback.doa_deg <= 90.0))
                throw DomainError("config: source doa_deg outside [-90, 90]");
            return fallback;
        }

        json source_to_json(const SourceSpec &s) { return {{"doa_deg", s.doa_deg}, {"power_db", s.power_db}}; }

        AngularSector sector_from_json(const json &j, const AngularSector &fallback)
        {
            reject_unknown_keys(j, {"intervals", "num_samples"}, "sector");
            std::vector<AngleInterval> intervals = fallback.intervals();
            if (j.contains("intervals"))
            {
                intervals.clear();
                for (const auto &iv : j.at("intervals"))
                {
                    if (!iv.is_array() || iv.size() != 2)
                        throw DomainError("config: sector interval must be [lo_deg, hi_deg]");
                    intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
                }
            }
            return AngularSector(std::move(intervals), j.value("num_samples", fallback.num_samples()));
        }

        json sector_to_json(const AngularSector &s)
        {
            json intervals = json::array();
            for (const auto &iv : s.intervals())
                intervals.push_back({iv.lo_deg, iv.hi_deg});
            return {{"intervals", intervals}, {"num_samples", s.num_samples()}};
        }

        MismatchModel mismatch_from_json(const json &j)
        {
            const std::string variant = j.value("variant", std::string("none"));
            MismatchModel out;
            if (variant == "none")
            {
                reject_unknown_keys(j, {"variant"}, "mismatch");
                out = NoMismatch{};
            }
            else if (variant == "accumulated_phase")
            {
                reject_unknown_keys(j, {"variant", "std_rad"}, "mismatch");
                AccumulatedPhase m;
                m.std_rad = j.value("std_rad", m.std_rad);
                out = m;
            }
            else if (variant == "incoherent_scattering")
            {
                reject_unknown_keys(j, {"variant", "num_paths", "doa_mean_deg", "doa_std_deg", "distribution"},
                                    "mismatch");
                IncoherentScattering m;
                m.num_paths = j.value("num_paths", m.num_paths);
                m.doa_mean_deg = j.value("doa_mean_deg", m.doa_mean_deg);
                m.doa_std_deg = j.value("doa_std_deg", m.doa_std_deg);
                const std::string dist = j.value("distribution", std::string("uniform"));
                if (dist == "uniform")
                    m.distribution = ScatterDistribution::uniform;
                else if (dist == "gaussian")
                    m.distribution = ScatterDistribution::gaussian;
                else
                    throw DomainError("config: unknown scatter distribution '" + dist + "'");
                out = m;
            }
            else
            {
                throw DomainError("config: unknown mismatch variant '" + variant + "'");
            }
            validate(out);
            return out;
        }

        std::string variant_name(const MismatchModel &m)
        {
            if (std::holds_alternative<AccumulatedPhase>(m))
                return "accumulated_phase";
            if (std::holds_alternative<IncoherentScattering>(m))
                return "incoherent_scattering";
            return "none";
        }

        json mismatch_to_json(const MismatchModel &m)
        {
            json j{{"variant", variant_name(m)}};
            if (const auto *p = std::get_if<AccumulatedPhase>(&m))
                j["std_rad"] = p->std_rad;
            else if (const auto *s = std::get_if<IncoherentScattering>(&m))
            {
                j["num_paths"] = s->num_paths;
                j["doa_mean_deg"] = s->doa_mean_deg;
                j["doa_std_deg"] = s->doa_std_deg;
                j["distribution"] = s->distribution == ScatterDistribution::uniform ? "uniform" : "gaussian";
            }
            return j;
        }

        bool sectors_overlap(const AngularSector &a, const AngularSector &b)
        {
            for (const auto &x : a.intervals())
                for (const auto &y : b.intervals())
                    if (x.lo_deg < y.hi_deg && y.lo_deg < x.hi_deg)
                        return true;
            return false;
        }
    }

    std::vector<std::string> ScenarioConfig::warnings() const
    {
        std::vector<std::string> out;
        if (sectors_overlap(signal_sector, complement_sector))
            out.push_back("signal and complement sectors overlap");
        if (!signal_sector.contains(desired.doa_deg))
            out.push_back("desired DoA " + std::to_string(desired.doa_deg) + " deg lies outside the signal sector");
        for (const auto &src : interferers)
            if (!complement_sector.contains(src.doa_deg))
                out.push_back("interferer DoA " + std::to_string(src.doa_deg) +
                              " deg lies outside the complement sector");
        return out;
    }

    MepsNpicCgConfig ScenarioConfig::solver_config() const
    {
        MepsNpicCgConfig sc{geometry, signal_sector, complement_sector, desired.doa_deg, 0.0, {}, {}};
        sc.meps.tol = meps_tol;
        sc.meps.max_iter = meps_max_iter;
        sc.beamformer.tol = tol;
        sc.beamformer.max_iter = max_iter;
        if (paper_faithful)
        {
            sc.meps.flavor = MepsSolver::fixed_step;
            sc.meps.max_iter = paper_faithful_meps_max_iter;
            sc.meps.return_last_iterate = true;
            sc.beamformer.flavor = BeamformerSolver::fixed_step;
        }
        return sc;
    }

    ScenarioConfig config_from_json(const json &j)
    {
        if (!j.is_object())
            throw DomainError("config: top level must be a JSON object");
        reject_unknown_keys(j,
                            {"scenario", "geometry", "desired", "interferers", "mismatch", "signal_sector",
                             "complement_sector", "snapshots", "snr_sweep", "snapshot_sweep", "runs", "tol", "max_iter",
                             "base_seed", "methods", "smi_loading", "meps_tol", "meps_max_iter", "paper_faithful",
                             "paper_faithful_meps_max_iter", "threads"},
                            "config");
        ScenarioConfig cfg;
        try
        {
            if (j.contains("geometry"))
            {
                const auto &g = j.at("geometry");
                reject_unknown_keys(g, {"num_sensors", "spacing_ratio"}, "geometry");
                cfg.geometry = ArrayGeometry(g.value("num_sensors", cfg.geometry.num_sensors()),
                                             g.value("spacing_ratio", cfg.geometry.spacing_ratio()));
            }
            if (j.contains("desired"))
                cfg.desired = source_from_json(j.at("desired"), cfg.desired);
            if (j.contains("interferers"))
            {
                cfg.interferers.clear();
                for (const auto &s : j.at("interferers"))
                    cfg.interferers.push_back(source_from_json(s, SourceSpec{}));
            }
            if (j.contains("mismatch"))
                cfg.mismatch = mismatch_from_json(j.at("mismatch"));
            cfg.scenario = j.value("scenario", variant_name(cfg.mismatch));
            if (j.contains("signal_sector"))
                cfg.signal_sector = sector_from_json(j.at("signal_sector"), cfg.signal_sector);
            if (j.contains("complement_sector"))
                cfg.complement_sector = sector_from_json(j.at("complement_sector"), cfg.complement_sector);
            cfg.snapshots = j.value("snapshots", cfg.snapshots);
            if (j.contains("snr_sweep"))
                cfg.snr_sweep = j.at("snr_sweep").get<std::vector<double>>();
            if (j.contains("snapshot_sweep"))
                cfg.snapshot_sweep = j.at("snapshot_sweep").get<std::vector<int>>();
            cfg.runs = j.value("runs", cfg.runs);
            cfg.tol = j.value("tol", cfg.tol);
            cfg.max_iter = j.value("max_iter", cfg.max_iter);
            cfg.base_seed = j.value("base_seed", cfg.base_seed);
            if (j.contains("methods"))
                cfg.methods = j.at("methods").get<std::vector<std::string>>();
            cfg.smi_loading = j.value("smi_loading", cfg.smi_loading);
            cfg.meps_tol = j.value("meps_tol", cfg.meps_tol);
            cfg.meps_max_iter = j.value("meps_max_iter", cfg.meps_max_iter);
            cfg.paper_faithful = j.value("paper_faithful", cfg.paper_faithful);
            cfg.paper_faithful_meps_max_iter = j.value("paper_faithful_meps_max_iter", cfg.paper_faithful_meps_max_iter);
            cfg.threads = j.value("threads", cfg.threads);
        }
        catch (const json::exception &e)
        {
            throw DomainError(std::string("config: ") + e.what());
        }

        if (cfg.scenario.find_first_of(",\n\"") != std::string::npos)
            throw DomainError("config: scenario name may not contain commas, quotes or newlines");
        if (cfg.snapshots < 1)
            throw DomainError("config: snapshots must be >= 1");
        for (int k : cfg.snapshot_sweep)
            if (k < 1)
                throw DomainError("config: snapshot_sweep entries must be >= 1");
        if (cfg.runs < 1)
            throw DomainError("config: runs must be >= 1");
        if (!(cfg.tol > 0.0) || !(cfg.meps_tol > 0.0))
            throw DomainError("config: tolerances must be positive");
        if (cfg.max_iter < 1 || cfg.meps_max_iter < 1 || cfg.paper_faithful_meps_max_iter < 1)
            throw DomainError("config: iteration limits must be >= 1");
        if (!(cfg.smi_loading >= 0.0))
            throw DomainError("config: smi_loading must be >= 0");
        if (cfg.threads < 0)
            throw DomainError("config: threads must be >= 0");
        for (const auto &m : cfg.methods)
            if (!kKnownMethods.count(m))
                throw DomainError("config: unknown method '" + m + "'");
        return cfg;
    }

    json config_to_json(const ScenarioConfig &cfg)
    {
        json interferers = json::array();
        for (const auto &s : cfg.interferers)
            interferers.push_back(source_to_json(s));
        return {{"scenario", cfg.scenario},
                {"geometry", {{"num_sensors", cfg.geometry.num_sensors()}, {"spacing_ratio", cfg.geometry.spacing_ratio()}}},
                {"desired", source_to_json(cfg.desired)},
                {"interferers", interferers},
                {"mismatch", mismatch_to_json(cfg.mismatch)},
                {"signal_sector", sector_to_json(cfg.signal_sector)},
                {"complement_sector", sector_to_json(cfg.complement_sector)},
                {"snapshots", cfg.snapshots},
                {"snr_sweep", cfg.snr_sweep},
                {"snapshot_sweep", cfg.snapshot_sweep},
                {"runs", cfg.runs},
                {"tol", cfg.tol},
                {"max_iter", cfg.max_iter},
                {"base_seed", cfg.base_seed},
                {"methods", cfg.methods},
                {"smi_loading", cfg.smi_loading},
                {"meps_tol", cfg.meps_tol},
                {"meps_max_iter", cfg.meps_max_iter},
                {"paper_faithful", cfg.paper_faithful},
                {"paper_faithful_meps_max_iter", cfg.paper_faithful_meps_max_iter},
                {"threads", cfg.threads}};
    }

    ScenarioConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open config file " + path.string());
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error &e)
        {
            throw DomainError("config " + path.string() + ": " + e.what());
        }
        return config_from_json(j);
    }

    // ---------------------------------------------------------------- runs

    namespace
    {
        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9e3779b97f4a7c15ULL;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
            return x ^ (x >> 31);
        }

        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    }

    std::uint64_t run_seed(std::uint64_t base_seed, double snr_db, int num_snapshots, int run_index)
    {
        std::uint64_t h = splitmix64(base_seed);
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(snr_db + 0.0)); // +0.0 folds -0 into 0
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(num_snapshots)));
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(run_index)));
        return h;
    }

    std::vector<SinrRecord> run_single(const ScenarioConfig &cfg, double snr_db, int num_snapshots, int run_index)
    {
        if (run_index < 0 || run_index >= cfg.runs)
            throw DomainError("run_single: run index out of range");
        Rng rng(run_seed(cfg.base_seed, snr_db, num_snapshots, run_index));
        const SourceSpec desired{cfg.desired.doa_deg, snr_db};
        const GeneratedSnapshots gen =
            generate_snapshots(cfg.geometry, desired, cfg.interferers, cfg.mismatch, num_snapshots, rng);
        const TruthModel truth = TruthModel::from_scenario(gen.truth, cfg.geometry.num_sensors());
        const ComplexVector nominal = steering_vector(cfg.geometry, cfg.desired.doa_deg);
        const bool rank_deficient = num_snapshots < cfg.geometry.num_sensors();

        std::vector<SinrRecord> records;
        for (const auto &method : cfg.methods)
        {
            SinrRecord rec{cfg.scenario, method, snr_db, num_snapshots, run_index, kNaN, false};
            try
            {
                if (method == kMethodMepsNpicCg)
                {
                    MepsNpicCgConfig sc = cfg.solver_config();
                    if (rank_deficient)
                        sc.diagonal_loading = ImplicitSampleCovariance::safety_loading(gen.batch);
                    const MepsNpicCgOutput out = meps_npic_cg(gen.batch, sc);
                    rec.sinr_db = output_sinr(out.beamformer.weights, truth);
                    rec.converged = out.beamformer.converged && out.meps_converged;
                }
                else if (method == kMethodOptimal)
                {
                    rec.sinr_db = output_sinr(optimal_weights(truth), truth);
                    rec.converged = true;
                }
                else if (method == kMethodSmi)
                {
                    rec.sinr_db = output_sinr(smi_weights(gen.batch, nominal, 0.0), truth);
                    rec.converged = true;
                }
                else if (method == kMethodSmiLoaded)
                {
                    rec.sinr_db = output_sinr(smi_weights(gen.batch, nominal, cfg.smi_loading), truth);
                    rec.converged = true;
                }
                else
                {
                    throw DomainError("run_single: unknown method '" + method + "'");
                }
            }
            catch (const SingularityError &)
            {
            }
            catch (const ConvergenceError &)
            {
            }
            catch (const DegenerateInputError &)
            {
            }
            records.push_back(std::move(rec));
        }
        return records;
    }

    int default_thread_count()
    {
        if (const char *env = std::getenv("BEAMSIM_THREADS"))
        {
            const int n = std::atoi(env);
            if (n > 0)
                return n;
        }
        return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }

    namespace
    {
        struct SweepPoint
        {
            double snr_db;
            int snapshots;
        };

        std::vector<SinrRecord> run_sweep(const ScenarioConfig &cfg, const std::vector<SweepPoint> &points)
        {
            const std::size_t num_tasks = points.size() * static_cast<std::size_t>(cfg.runs);
            std::vector<std::vector<SinrRecord>> results(num_tasks);

            int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
            threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(num_tasks, 1)));

            std::atomic<std::size_t> next{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            auto worker = [&]
            {
                for (std::size_t task = next++; task < num_tasks; task = next++)
                {
                    const auto &pt = points[task / cfg.runs];
                    try
                    {
                        results[task] = run_single(cfg, pt.snr_db, pt.snapshots, static_cast<int>(task % cfg.runs));
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            };

            if (threads <= 1)
                worker();
            else
            {
                std::vector<std::jthread> pool;
                for (int i = 0; i < threads; ++i)
                    pool.emplace_back(worker);
            }
            if (failure)
                std::rethrow_exception(failure);

            std::vector<SinrRecord> out;
            out.reserve(num_tasks * cfg.methods.size());
            for (auto &r : results)
                std::move(r.begin(), r.end(), std::back_inserter(out));
            return out;
        }
    }

    std::vector<SinrRecord> sweep_snr(const ScenarioConfig &cfg)
    {
        std::vector<SweepPoint> points;
        for (double snr : cfg.snr_sweep)
            points.push_back({snr, cfg.snapshots});
        return run_sweep(cfg, points);
    }

    std::vector<SinrRecord> sweep_snapshots(const ScenarioConfig &cfg)
    {
        std::vector<SweepPoint> points;
        for (int k : cfg.snapshot_sweep)
            points.push_back({cfg.desired.power_db, k});
        return run_sweep(cfg, points);
    }

    // ---------------------------------------------------------------- output

    namespace
    {
        std::string format_double(double x)
        {
            if (std::isnan(x))
                return "nan";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        std::ofstream open_for_write(const std::filesystem::path &path)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open " + path.string() + " for writing");
            return out;
        }

        void finish_write(std::ofstream &out, const std::filesystem::path &path)
        {
            out.flush();
            if (!out)
                throw std::runtime_error("write to " + path.string() + " failed");
        }
    }

    void write_csv(const std::vector<SinrRecord> &records, std::ostream &out)
    {
        out << "scenario,method,snr_db,snapshots,run,sinr_db,converged\n";
        for (const auto &r : records)
            out << r.scenario << ',' << r.method << ',' << format_double(r.snr_db) << ',' << r.snapshots << ','
                << r.run_index << ',' << format_double(r.sinr_db) << ',' << (r.converged ? "true" : "false") << '\n';
    }

    void emit_csv(const std::vector<SinrRecord> &records, const std::filesystem::path &path)
    {
        std::ofstream out = open_for_write(path);
        write_csv(records, out);
        finish_write(out, path);
    }

    std::vector<SinrRecord> read_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open " + path.string());
        std::string line;
        std::getline(in, line);
        if (line != "scenario,method,snr_db,snapshots,run,sinr_db,converged")
            throw std::runtime_error(path.string() + ": unexpected CSV header");
        std::vector<SinrRecord> out;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::vector<std::string> fields;
            std::stringstream ss(line);
            std::string field;
            while (std::getline(ss, field, ','))
                fields.push_back(field);
            if (fields.size() != 7)
                throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
            SinrRecord r;
            r.scenario = fields[0];
            r.method = fields[1];
            r.snr_db = std::stod(fields[2]);
            r.snapshots = std::stoi(fields[3]);
            r.run_index = std::stoi(fields[4]);
            r.sinr_db = fields[5] == "nan" ? kNaN : std::stod(fields[5]);
            r.converged = fields[6] == "true";
            out.push_back(std::move(r));
        }
        return out;
    }

    double median(std::vector<double> values)
    {
        if (values.empty())
            return kNaN;
        const std::size_t mid = values.size() / 2;
        std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
        const double upper = values[mid];
        if (values.size() % 2 == 1)
            return upper;
        const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
        return 0.5 * (lower + upper);
    }

    std::vector<SweepPointSummary> summarize(const std::vector<SinrRecord> &records)
    {
        std::vector<SweepPointSummary> out;
        std::vector<std::vector<double>> values;
        for (const auto &r : records)
        {
            auto it = std::find_if(out.begin(), out.end(), [&](const SweepPointSummary &s)
                                   { return s.scenario == r.scenario && s.method == r.method && s.snr_db == r.snr_db &&
                                            s.snapshots == r.snapshots; });
            if (it == out.end())
            {
                out.push_back({r.scenario, r.method, r.snr_db, r.snapshots});
                values.emplace_back();
                it = out.end() - 1;
            }
            const auto idx = static_cast<std::size_t>(it - out.begin());
            if (std::isnan(r.sinr_db))
                ++it->failures;
            else
                values[idx].push_back(r.sinr_db);
            it->converged += r.converged ? 1 : 0;
        }
        for (std::size_t i = 0; i < out.size(); ++i)
        {
            const auto &v = values[i];
            out[i].count = static_cast<int>(v.size());
            double sum = 0.0;
            for (double x : v)
                sum += x;
            out[i].mean_sinr_db = v.empty() ? kNaN : sum / static_cast<double>(v.size());
            out[i].median_sinr_db = median(v);
        }
        return out;
    }

    void emit_summary_csv(const std::vector<SweepPointSummary> &summary, const std::filesystem::path &path)
    {
        std::ofstream out = open_for_write(path);
        out << "scenario,method,snr_db,snapshots,runs,failures,converged,mean_sinr_db,median_sinr_db\n";
        for (const auto &s : summary)
            out << s.scenario << ',' << s.method << ',' << format_double(s.snr_db) << ',' << s.snapshots << ','
                << s.count + s.failures << ',' << s.failures << ',' << s.converged << ','
                << format_double(s.mean_sinr_db) << ',' << format_double(s.median_sinr_db) << '\n';
        finish_write(out, path);
    }

    std::vector<SpectrumPoint> spectrum_curve(const ScenarioConfig &cfg)
    {
        Rng rng(run_seed(cfg.base_seed, cfg.desired.power_db, cfg.snapshots, 0));
        const GeneratedSnapshots gen =
            generate_snapshots(cfg.geometry, cfg.desired, cfg.interferers, cfg.mismatch, cfg.snapshots, rng);
        const MepsNpicCgConfig sc = cfg.solver_config();
        const double loading = cfg.snapshots < cfg.geometry.num_sensors()
                                   ? ImplicitSampleCovariance::safety_loading(gen.batch)
                                   : 0.0;
        const ImplicitSampleCovariance cov(gen.batch, loading);
        const MepsSolution sol = solve_v(cov, sc.meps);

        std::vector<double> grid;
        for (int deg = -90; deg <= 90; ++deg)
            grid.push_back(deg);
        const std::vector<double> power = meps_spectrum(sol, cfg.geometry, grid);
        std::vector<SpectrumPoint> out;
        for (std::size_t i = 0; i < grid.size(); ++i)
            out.push_back({grid[i], 10.0 * std::log10(power[i])});
        return out;
    }

    void emit_spectrum_csv(const std::vector<SpectrumPoint> &curve, const std::filesystem::path &path)
    {
        std::ofstream out = open_for_write(path);
        out << "theta_deg,power_db\n";
        for (const auto &p : curve)
            out << format_double(p.theta_deg) << ',' << format_double(p.power_db) << '\n';
        finish_write(out, path);
    }
}
