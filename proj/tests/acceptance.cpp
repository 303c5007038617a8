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


// Acceptance run: one PASS/FAIL line per criterion, CSV artifacts under --out.

#include "irsap/config.hpp"
#include "irsap/oracle.hpp"
#include "irsap/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace irsap;
namespace fs = std::filesystem;

namespace
{
    struct Verdict
    {
        bool pass = false;
        std::string detail;
    };

    std::string fmt(const char *f, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, f, args...);
        return buf;
    }

    void write_file(const fs::path &p, const std::string &text)
    {
        fs::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << text;
    }

    const std::uint64_t base_seed = 1;
    int threads = 0;
    fs::path out_dir;

    // --- 1 and 2: AO traces and subproblem bounds ---

    struct AoRuns
    {
        std::string trace_csv;
        std::vector<SubproblemRecord> records;
        int violations = 0;
        int runs = 0;
        std::size_t sweeps = 0;
    };

    AoRuns ao_runs(const ChannelModel &model, const AOConfig &ao)
    {
        const int runs = 50, D = 4;
        std::vector<std::vector<DesignResult>> results(runs, std::vector<DesignResult>(D));
        parallel_for(static_cast<std::size_t>(runs * D), threads, [&](std::size_t i) {
            const int run = static_cast<int>(i) / D, d = static_cast<int>(i) % D + 1;
            std::mt19937_64 rng(codebook_seed(base_seed + static_cast<std::uint64_t>(run), D) + static_cast<std::uint64_t>(d));
            results[static_cast<std::size_t>(run)][static_cast<std::size_t>(d - 1)] = design_codeword(model, {D, d}, ao, rng);
        });
        AoRuns r;
        r.runs = runs;
        std::ostringstream csv;
        csv << "run,sector,sweep,smaecp\n";
        for (int run = 0; run < runs; ++run)
            for (int d = 1; d <= D; ++d)
            {
                const auto &res = results[static_cast<std::size_t>(run)][static_cast<std::size_t>(d - 1)];
                for (std::size_t k = 0; k < res.trace.size(); ++k)
                {
                    csv << run << ',' << d << ',' << k << ',' << fmt("%.17g", res.trace[k]) << '\n';
                    if (k > 0 && res.trace[k] < res.trace[k - 1])
                        ++r.violations;
                }
                r.sweeps += static_cast<std::size_t>(res.sweeps);
                r.records.insert(r.records.end(), res.subproblems.begin(), res.subproblems.end());
            }
        r.trace_csv = csv.str();
        return r;
    }

    Verdict criterion1(const AoRuns &r)
    {
        return {r.violations == 0, fmt("%d runs x 4 sectors, %zu sweeps, %d trace decreases", r.runs, r.sweeps, r.violations)};
    }

    Verdict criterion2(const AoRuns &r)
    {
        int above_bound = 0, above_primal = 0, wide_gap = 0;
        double worst_gap = 0.0;
        for (const auto &s : r.records)
        {
            const double tol = 1e-12 * std::max(1.0, std::abs(s.upper_bound));
            if (s.randomized_value > s.upper_bound + tol)
                ++above_bound;
            if (s.randomized_value > s.relaxed_value + tol)
                ++above_primal;
            if (s.relative_gap > 1e-7)
                ++wide_gap;
            worst_gap = std::max(worst_gap, s.relative_gap);
        }
        return {above_bound == 0 && wide_gap == 0,
                fmt("%zu subproblems, randomized above dual bound %d, above primal value %d (within gap), "
                    "max relative gap %.2e, gaps above 1e-7 %d",
                    r.records.size(), above_bound, above_primal, worst_gap, wide_gap)};
    }

    // --- 3: toy instances against the exhaustive grid ---

    Verdict criterion3(const AOConfig &base)
    {
        const int instances = 20;
        std::vector<double> ratio(instances);
        std::vector<std::string> desc(instances);
        parallel_for(instances, threads, [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(base_seed, 300 + i));
            RadomeConfig cfg;
            std::uniform_int_distribution<int> m(1, 2), irs(0, irs_count - 1), total(1, 6), dpick(0, 3);
            cfg.antennas_x = m(rng);
            cfg.antennas_y = cfg.antennas_x == 2 ? 1 : m(rng);
            std::array<int, irs_count> counts{};
            const int n = total(rng);
            for (int k = 0; k < n; ++k)
                ++counts[static_cast<std::size_t>(irs(rng))];
            const int D = 1 << dpick(rng);
            const int d = std::uniform_int_distribution<int>(1, D)(rng);
            const RadomeGeometry g = build_geometry(cfg, counts);
            AOConfig ao = base;
            ao.samples = 4;
            const DesignResult r = design_codeword(ChannelModel(g), {D, d}, ao, rng);
            const QuantizedOptimum q = exhaustive_quantized_optimum(g, {D, d}, 4, {16, 1u << 24});
            ratio[i] = r.objective() / q.value;
            desc[i] = fmt("N=(%d,%d,%d,%d) M=%d sector %d/%d", counts[0], counts[1], counts[2], counts[3],
                          cfg.antenna_count(), d, D);
        });
        std::size_t worst = 0;
        for (std::size_t i = 1; i < ratio.size(); ++i)
            if (ratio[i] < ratio[worst])
                worst = i;
        return {ratio[worst] >= 0.95,
                fmt("20 instances, worst AO / Q=16 optimum %.4f (%s)", ratio[worst], desc[worst].c_str())};
    }

    // --- 4: single-element closed form from the independent term expansion ---

    Verdict criterion4(const AOConfig &base)
    {
        const int cases = 100;
        std::vector<double> err(cases);
        std::vector<int> resampled(cases, 0);
        parallel_for(cases, threads, [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(base_seed, 400 + i));
            while (true)
            {
                RadomeConfig cfg;
                cfg.antennas_x = std::uniform_int_distribution<int>(1, 2)(rng);
                cfg.antennas_y = std::uniform_int_distribution<int>(1, 2)(rng);
                std::array<int, irs_count> counts{};
                counts[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 3)(rng))] = 1;
                const int D = 1 << std::uniform_int_distribution<int>(0, 3)(rng);
                const int d = std::uniform_int_distribution<int>(1, D)(rng);
                const RadomeGeometry g = build_geometry(cfg, counts);

                cplx acc = 0.0, scale = 0.0;
                for (double phi : sample_azimuths({D, d}, base.samples))
                {
                    const TermExpansion t = term_expansion({cfg.max_elevation, phi}, g);
                    acc += t.single[0].dot(t.direct);
                    scale += t.single[0].norm() * t.direct.norm();
                }
                // an element that is dark over the whole sector, or orthogonal on average, has no preferred phase
                if (std::abs(acc) <= 1e-3 * std::abs(scale))
                {
                    ++resampled[i];
                    continue;
                }
                const DesignResult r = design_codeword(ChannelModel(g), {D, d}, base, rng);
                err[i] = std::abs(std::remainder(r.pattern.phases()[0] - std::arg(acc), 2 * pi));
                return;
            }
        });
        int within = 0, skipped = 0;
        double worst = 0.0;
        for (int i = 0; i < cases; ++i)
        {
            within += err[static_cast<std::size_t>(i)] <= 1e-3;
            worst = std::max(worst, err[static_cast<std::size_t>(i)]);
            skipped += resampled[static_cast<std::size_t>(i)];
        }
        return {within == cases,
                fmt("%d/%d within 1e-3 rad, worst %.2e rad, %d degenerate draws resampled", within, cases, worst, skipped)};
    }

    // --- 5: analytic identities ---

    Verdict criterion5(const ChannelModel &model)
    {
        const RadomeConfig &cfg = model.config();
        double worst_norm = 0.0;
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 100; ++b)
            {
                const Direction dir{(a + 0.5) * cfg.max_elevation / 10, (b + 0.5) * 2 * pi / 100};
                const double n = direct_arv(dir, cfg).squaredNorm();
                const double want = cfg.antenna_count() * cfg.boresight_gain;
                worst_norm = std::max(worst_norm, std::abs(n - want) / want);
            }
        const double a1 = std::abs(los_coefficient(4 * pi / 9, cfg));

        std::mt19937_64 rng(derive_seed(base_seed, 500));
        std::uniform_real_distribution<double> el(0.0, cfg.max_elevation), az(0.0, 2 * pi);
        double worst_earv = 0.0;
        for (int i = 0; i < 100; ++i)
        {
            const Direction dir{el(rng), az(rng)};
            const auto p = ReflectionPattern::random(model.geometry().element_counts(), rng);
            const CVector h = model.earv(dir, p);
            worst_earv = std::max(worst_earv, (h - term_enumeration_earv(dir, p, model.geometry())).norm() / h.norm());
        }
        const bool pass = worst_norm <= 1e-14 && std::abs(a1 - 1.3817e-4) <= 1e-8 && worst_earv <= 1e-12;
        return {pass, fmt("|h_d|^2 max relative error %.1e on 1000 directions, |a_1(4pi/9)| = %.8e, "
                          "EARV vs term enumeration max relative error %.1e",
                          worst_norm, a1, worst_earv)};
    }

    // --- 6 to 10: experiments ---

    ExperimentResult experiment(const ChannelModel &model, ExperimentConfig cfg, const std::string &name, int trials,
                                CodebookStore &store)
    {
        cfg.name = name;
        cfg.trials = trials;
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentResult r = run_experiment(model, cfg, store, base_seed, threads);
        r.write(out_dir);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "  %s: %d trials in %.1f s\n", name.c_str(), trials, secs);
        return r;
    }

    Verdict criterion6(const ExperimentResult &r)
    {
        const auto &prop = r.at("proposed");
        bool increasing = true;
        for (std::size_t i = 1; i < prop.size(); ++i)
            increasing = increasing && prop[i] > prop[i - 1];
        const std::size_t k = prop.size() - 1;
        const double rnd = r.at("random")[k], dft = r.at("dft")[k], uni = r.at("unity")[k], none = r.at("no-irs")[k];
        const bool order = prop[k] > rnd && rnd > std::max(dft, uni) && std::min(dft, uni) > none;
        const double gain = prop[k] - none;
        const bool band = gain >= 4.0 && gain <= 12.0;
        return {increasing && order && band,
                fmt("(a) proposed strictly increasing: %s; (b) at D=8 proposed %.2f, random %.2f, dft %.2f, unity %.2f, "
                    "no-irs %.2f dB, ordering %s; (c) gain %.2f dB %s",
                    increasing ? "yes" : "no", prop[k], rnd, dft, uni, none, order ? "holds" : "violated", gain,
                    band ? "in [4, 12]" : "outside [4, 12]")};
    }

    Verdict criterion7(const ExperimentResult &r)
    {
        auto shape = [&](const std::string &name) {
            const auto &v = r.at(name);
            bool dec = true, inc = true;
            for (std::size_t i = 1; i < v.size(); ++i)
            {
                dec = dec && v[i] < v[i - 1];
                inc = inc && v[i] > v[i - 1];
            }
            const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
            return std::make_tuple(dec, inc, peak > 0 && peak + 1 < v.size(), peak);
        };
        const auto [d10, i10, p10, k10] = shape("T_u=10");
        const auto [d100, i100, p100, k100] = shape("T_u=100");
        const auto [d20, i20, p20, k20] = shape("T_u=20");
        (void)i10, (void)p10, (void)k10, (void)d100, (void)p100, (void)k100, (void)d20, (void)i20;
        return {d10 && i100 && p20, fmt("T_u=10 decreasing: %s; T_u=100 increasing: %s; T_u=20 interior peak: %s (at D=%g)",
                                        d10 ? "yes" : "no", i100 ? "yes" : "no", p20 ? "yes" : "no", r.axis[k20])};
    }

    Verdict criterion8(const ExperimentResult &r)
    {
        const auto &prop = r.at("proposed");
        bool nondec = true;
        for (std::size_t i = 1; i < prop.size(); ++i)
            nondec = nondec && prop[i] >= prop[i - 1];
        std::string losses;
        for (std::size_t i = 0; i < prop.size(); ++i)
            for (const auto &[name, v] : r.series)
                if (name != "proposed" && v[i] >= prop[i])
                    losses += fmt(" %s>=proposed@%gdB", name.c_str(), r.axis[i]);
        std::string trend;
        for (double v : prop)
            trend += fmt(" %.3f", v);
        return {nondec && losses.empty(),
                fmt("proposed rate over kappa:%s (non-decreasing: %s); dominance violations:%s", trend.c_str(),
                    nondec ? "yes" : "no", losses.empty() ? " none" : losses.c_str())};
    }

    Verdict criterion9(const ChannelModel &model, const ExperimentConfig &cfg, CodebookStore &store, int trials)
    {
        const MobilityConfig &mob = cfg.mobility;
        const auto t0 = std::chrono::steady_clock::now();
        const MobilityResult m = run_mobility(model, store.get(mob.sectors), mob, from_db(cfg.kappa_db), cfg.paths,
                                              cfg.budget.value_or(calibrated_budget(model.config())), trials, base_seed,
                                              threads);
        std::fprintf(stderr, "  mobility: %d trials in %.1f s\n", trials,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

        std::ostringstream csv;
        csv << "t,fast,slow-T3,slow-T6,user-sector,held-sector-T3,held-sector-T6\n";
        for (std::size_t i = 0; i < m.instants.size(); ++i)
            csv << m.instants[i] << ',' << fmt("%.17g", m.fast[i]) << ',' << fmt("%.17g", m.slow.at(3)[i]) << ','
                << fmt("%.17g", m.slow.at(6)[i]) << ',' << m.user_sector[i] << ',' << m.held_sector.at(3)[i] << ','
                << m.held_sector.at(6)[i] << '\n';
        write_file(out_dir / "mobility.csv", csv.str());

        double worst3 = 0.0;
        int worst3_t = 0;
        std::string dips, mismatches;
        bool dips_match = true;
        for (std::size_t i = 0; i < m.instants.size(); ++i)
        {
            const double gap3 = (m.fast[i] - m.slow.at(3)[i]) / m.fast[i];
            if (gap3 > worst3)
            {
                worst3 = gap3;
                worst3_t = m.instants[i];
            }
            const bool dip = (m.fast[i] - m.slow.at(6)[i]) / m.fast[i] > 0.05;
            const bool mismatch = m.held_sector.at(6)[i] != m.user_sector[i];
            if (dip)
                dips += fmt(" %d", m.instants[i]);
            if (mismatch)
                mismatches += fmt(" %d", m.instants[i]);
            dips_match = dips_match && dip == mismatch;
        }
        int order_violations = 0;
        for (const auto &[T, per_trial] : m.slow_trials)
            for (std::size_t k = 0; k < per_trial.size(); ++k)
                for (std::size_t i = 0; i < per_trial[k].size(); ++i)
                    order_violations += m.fast_trials[k][i] < per_trial[k][i];
        const bool pass = worst3 <= 0.05 && dips_match && order_violations == 0;
        return {pass, fmt("T=3 worst gap %.1f%% at t=%d; T=6 dips (>5%%) at {%s } vs sector mismatch at {%s }; "
                          "fast < slow in %d trial-instants",
                          100 * worst3, worst3_t, dips.c_str(), mismatches.c_str(), order_violations)};
    }

    Verdict criterion10(std::size_t union_size, const ExperimentResult &mu, const ExperimentResult &hist)
    {
        const std::size_t k = mu.axis.size() - 1;
        const double prop = mu.at("proposed")[k];
        std::string losses;
        for (const auto &[name, v] : mu.series)
            if (name != "proposed" && v[k] >= prop)
                losses += " " + name;
        const auto &single = hist.at("single-user");
        const auto &multi = hist.at("multi-user");
        const double d8 = single.back();
        int support = 0;
        for (double p : multi)
            support += p > 0.0;
        std::string spread;
        for (double p : multi)
            spread += fmt(" %.3f", p);
        const bool pass = union_size == 15 && losses.empty() && d8 >= 0.9 && support >= 2;
        return {pass, fmt("|C~_15| = %zu; sum rate at X=%g proposed %.3f, beaten by:%s; single-user mass on D=8 %.3f; "
                          "K=4 histogram%s over D",
                          union_size, mu.axis[k], prop, losses.empty() ? " none" : losses.c_str(), d8, spread.c_str())};
    }

    // --- 11: Rician statistics ---

    Verdict criterion11(const RadomeConfig &cfg)
    {
        std::string detail;
        bool pass = true;
        for (double kappa : {1.0, 10.0})
        {
            std::mt19937_64 rng(derive_seed(base_seed, 1100 + static_cast<std::uint64_t>(kappa)));
            double ratio = 0.0;
            const int draws = 10000;
            for (int i = 0; i < draws; ++i)
            {
                const auto r = draw_rician_realization({cfg.max_elevation, 1.0}, kappa, 5, cfg, rng);
                double nlos = 0.0;
                for (std::size_t p = 1; p < r.gains.size(); ++p)
                    nlos += std::norm(r.gains[p]);
                ratio += nlos / std::norm(r.gains[0]);
            }
            ratio /= draws;
            const double rel = std::abs(ratio * kappa - 1.0);
            pass = pass && rel <= 0.05;
            detail += fmt("%skappa=%g: ratio %.4f vs %.4f (%.1f%% off)", detail.empty() ? "" : "; ", kappa, ratio,
                          1.0 / kappa, 100 * rel);
        }
        return {pass, detail};
    }

    void report(int n, const Verdict &v, int &failures)
    {
        std::printf("criterion %d: %s: %s\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"irsap acceptance run"};
    std::string out = "acceptance_output";
    int trials = 100;
    int histogram_trials = 1000;
    app.add_option("--out", out, "Directory for CSV artifacts");
    app.add_option("--threads", threads, "Worker threads (0 = all cores)");
    app.add_option("--trials", trials, "Monte Carlo trials of the experiment criteria");
    app.add_option("--histogram-trials", histogram_trials, "Trials of the sector-count histogram");
    CLI11_PARSE(app, argc, argv);
    out_dir = out;
    fs::create_directories(out_dir);

    const AppConfig defaults;
    const ChannelModel model(defaults.geometry());
    const ExperimentConfig &exp = defaults.experiment;
    int failures = 0;

    const AoRuns runs = ao_runs(model, defaults.ao);
    write_file(out_dir / "ao-traces.csv", runs.trace_csv);
    report(1, criterion1(runs), failures);
    report(2, criterion2(runs), failures);
    report(3, criterion3(defaults.ao), failures);
    report(4, criterion4(defaults.ao), failures);
    report(5, criterion5(model), failures);

    CodebookStore store(model, defaults.ao, base_seed, threads);
    const ExperimentResult coverage = experiment(model, exp, "coverage-vs-D", trials, store);
    report(6, criterion6(coverage), failures);
    report(7, criterion7(experiment(model, exp, "overhead", trials, store)), failures);
    report(8, criterion8(experiment(model, exp, "rate-vs-kappa", trials, store)), failures);
    report(9, criterion9(model, exp, store, trials), failures);
    const ExperimentResult multiuser = experiment(model, exp, "multiuser-vs-X", trials, store);
    const ExperimentResult histogram = experiment(model, exp, "sector-count-histogram", histogram_trials, store);
    report(10, criterion10(store.union_of({1, 2, 4, 8}).size(), multiuser, histogram), failures);
    report(11, criterion11(defaults.radome), failures);

    // fresh stores redesign every codebook, so identical bytes also cover the designs
    const AoRuns again = ao_runs(model, defaults.ao);
    CodebookStore fresh(model, defaults.ao, base_seed, threads);
    const fs::path saved = out_dir;
    out_dir = saved / "rerun";
    const bool same1 = again.trace_csv == runs.trace_csv;
    const bool same6 = experiment(model, exp, "coverage-vs-D", trials, fresh).csv() == coverage.csv();
    const bool same10 = experiment(model, exp, "multiuser-vs-X", trials, fresh).csv() == multiuser.csv() &&
                        experiment(model, exp, "sector-count-histogram", histogram_trials, fresh).csv() == histogram.csv();
    out_dir = saved;
    report(12, {same1 && same6 && same10,
                fmt("AO traces %s, coverage CSV %s, multi-user and histogram CSVs %s", same1 ? "identical" : "differ",
                    same6 ? "identical" : "differs", same10 ? "identical" : "differ")},
           failures);

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
