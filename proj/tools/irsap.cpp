// SPDX-License-Identifier: Apache-2.0
//
// irsap - codebook design and evaluation for IRS-integrated access points
// Copyright (C) 2026 The irsap authors
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


// irsap command-line driver: design, eval, patterns, oracle-check, defaults

#include "irsap/codebook_io.hpp"
#include "irsap/config.hpp"
#include "irsap/oracle.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace irsap;

namespace
{
    enum ExitCode
    {
        ok = 0,
        failure = 1,
        config_error = 2,
        solver_error = 3,
        hash_mismatch = 4,
    };

    struct Options
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<int> threads;
        std::string out;
        std::vector<std::string> codebooks;
        std::size_t index = 0;
        std::optional<std::string> experiment;
        std::optional<int> trials;
    };

    AppConfig configure(const Options &o)
    {
        AppConfig cfg = o.config.empty() ? AppConfig{} : load_config(o.config);
        if (o.seed)
            cfg.seed = *o.seed;
        if (o.threads)
            cfg.threads = *o.threads;
        if (o.experiment)
            cfg.experiment.name = *o.experiment;
        if (o.trials)
            cfg.experiment.trials = *o.trials;
        cfg.validate();
        return cfg;
    }

    std::string number(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    void write_text(const std::filesystem::path &file, const std::string &text)
    {
        if (file.has_parent_path())
            std::filesystem::create_directories(file.parent_path());
        std::ofstream f(file, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + file.string());
        f << text;
    }

    int cmd_design(const Options &o)
    {
        const AppConfig cfg = configure(o);
        const ChannelModel model(cfg.geometry());
        const Codebook cb = cfg.design_sectors.size() == 1
                                ? build_single_user_codebook(model, cfg.design_sectors.front(), cfg.ao,
                                                             codebook_seed(cfg.seed, cfg.design_sectors.front()), cfg.threads)
                                : build_multi_user_codebook(model, cfg.design_sectors, cfg.ao, cfg.seed, cfg.threads);
        for (const auto &e : cb.entries)
            std::printf("D=%d d=%d smaecp=%.6e (%.3f dB) sweeps=%d\n", e.sectors, e.sector, e.objective, to_db(e.objective),
                        e.sweeps);
        const std::string out = o.out.empty() ? "codebook.json" : o.out;
        save_codebook(out, cb);
        std::printf("wrote %zu codewords to %s\n", cb.size(), out.c_str());
        return ok;
    }

    int cmd_eval(const Options &o)
    {
        const AppConfig cfg = configure(o);
        const ChannelModel model(cfg.geometry());
        CodebookStore store(model, cfg.ao, cfg.seed, cfg.threads);
        for (const auto &file : o.codebooks)
            store.add(load_codebook(file, model.geometry().hash()));
        ExperimentResult res = run_experiment(model, cfg.experiment, store, cfg.seed, cfg.threads);
        res.config_hash = cfg.hash();
        const std::filesystem::path dir = o.out.empty() ? "results" : o.out;
        res.write(dir);
        std::cout << res.csv();
        std::printf("wrote %s\n", (dir / (res.experiment + ".csv")).string().c_str());
        return ok;
    }

    int cmd_patterns(const Options &o)
    {
        const AppConfig cfg = configure(o);
        const ChannelModel model(cfg.geometry());
        if (o.codebooks.size() != 1)
            throw ConfigError("patterns needs exactly one --codebook");
        const Codebook cb = load_codebook(o.codebooks.front(), model.geometry().hash());
        if (o.index >= cb.size())
            throw ConfigError("--index " + std::to_string(o.index) + " is out of range for a codebook of " +
                              std::to_string(cb.size()) + " codewords");
        const PowerPatterns p = power_patterns(model, cb[o.index], cfg.experiment.pattern_samples);
        auto table = [](const char *axis, const std::vector<PowerSample> &rows) {
            std::string s = std::string(axis) + ",effective_dB,reflection_dB,direct_dB\n";
            for (const auto &r : rows)
                s += number(r.angle) + "," + number(to_db(r.effective)) + "," + number(to_db(r.reflection)) + "," +
                     number(to_db(r.direct)) + "\n";
            return s;
        };
        const std::filesystem::path dir = o.out.empty() ? "patterns" : o.out;
        write_text(dir / "elevation.csv", table("theta", p.elevation));
        write_text(dir / "azimuth.csv", table("phi", p.azimuth));
        std::printf("wrote %s and %s\n", (dir / "elevation.csv").string().c_str(), (dir / "azimuth.csv").string().c_str());
        return ok;
    }

    // Quick self-check of the channel and optimizer against the brute-force references
    int cmd_oracle_check(const Options &o)
    {
        const AppConfig cfg = configure(o);
        const ChannelModel model(cfg.geometry());
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> elev(0.0, cfg.radome.max_elevation), azim(0.0, 2.0 * pi);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const Direction dir{elev(rng), azim(rng)};
            const ReflectionPattern p = ReflectionPattern::random(model.geometry().element_counts(), rng);
            const CVector a = model.earv(dir, p);
            worst = std::max(worst, (a - term_enumeration_earv(dir, p, model.geometry())).cwiseAbs().maxCoeff() /
                                        std::max(1.0, a.cwiseAbs().maxCoeff()));
        }
        const bool earv_ok = worst <= 1e-12;
        std::printf("earv vs term enumeration, 100 random patterns: max relative deviation %.3e [%s]\n", worst,
                    earv_ok ? "ok" : "FAIL");

        RadomeConfig toy = cfg.radome;
        toy.antennas_x = toy.antennas_y = 1;
        const ChannelModel small(build_geometry(toy, {1, 1, 0, 0}));
        AOConfig ao = cfg.ao;
        ao.samples = 4;
        const SectorSpec sector{1, 1};
        const DesignResult d = design_codeword(small, sector, ao, rng);
        const QuantizedOptimum q = exhaustive_quantized_optimum(small.geometry(), sector, 4, {64, 1u << 20});
        const bool ao_ok = d.objective() >= 0.95 * q.value;
        std::printf("toy design (2 IRSs x 1 element, M=1, L=4): AO %.6e vs 64-level grid %.6e, ratio %.4f [%s]\n",
                    d.objective(), q.value, d.objective() / q.value, ao_ok ? "ok" : "FAIL");
        return earv_ok && ao_ok ? ok : failure;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"irsap: passive-reflection codebook design and evaluation for IRS-integrated access points"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "JSON configuration file (defaults when omitted)");
        sub->add_option("--seed", o.seed, "Override the configured seed");
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
        sub->add_option("--out", o.out, "Output file or directory");
    };

    CLI::App *design = app.add_subcommand("design", "Design C_D, or the union codebook when design.D lists several D");
    common(design);

    CLI::App *eval = app.add_subcommand("eval", "Run the configured experiment and write CSV plus metadata");
    common(eval);
    eval->add_option("--codebook", o.codebooks, "Designed codebook files; missing C_D are designed on the fly");
    eval->add_option("--experiment", o.experiment, "Override experiment.name");
    eval->add_option("--trials", o.trials, "Override experiment.trials");

    CLI::App *patterns = app.add_subcommand("patterns", "Elevation and azimuth power patterns of one codeword");
    common(patterns);
    patterns->add_option("--codebook", o.codebooks, "Codebook file")->required();
    patterns->add_option("--index", o.index, "0-based codeword index");

    CLI::App *check = app.add_subcommand("oracle-check", "Compare the channel model and optimizer with brute force");
    common(check);

    CLI::App *defaults = app.add_subcommand("defaults", "Print the full configuration with every default");
    common(defaults);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try
    {
        if (*design)
            return cmd_design(o);
        if (*eval)
            return cmd_eval(o);
        if (*patterns)
            return cmd_patterns(o);
        if (*check)
            return cmd_oracle_check(o);
        std::cout << dump_config(configure(o));
        return ok;
    }
    catch (const HashMismatchError &e)
    {
        std::cerr << "hash mismatch: " << e.what() << "\n";
        return hash_mismatch;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return config_error;
    }
    catch (const SolverError &e)
    {
        std::cerr << "solver error: " << e.what() << "\n";
        return solver_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
}
