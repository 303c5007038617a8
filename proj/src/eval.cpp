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


#include "irsap/eval.hpp"
#include "irsap/hash.hpp"
#include "irsap/parallel.hpp"
#include "irsap/random.hpp"

#include <Eigen/Cholesky>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace irsap
{
    void LinkBudget::validate() const
    {
        if (!(power > 0.0) || !std::isfinite(power))
            throw ConfigError("link.P must be positive");
        if (!(noise > 0.0) || !std::isfinite(noise))
            throw ConfigError("link.sigma2 must be positive");
        if (users < 1)
            throw ConfigError("link.K must be >= 1");
    }

    LinkBudget calibrated_budget(const RadomeConfig &cfg, int users)
    {
        LinkBudget b;
        b.noise = 1.0;
        b.power = 1.0 / (cfg.antenna_count() * cfg.boresight_gain * std::norm(los_coefficient(cfg.max_elevation, cfg)));
        b.users = users;
        return b;
    }

    PowerPatterns power_patterns(const ChannelModel &model, const ReflectionPattern &pattern, int samples)
    {
        if (samples < 1)
            throw ConfigError("pattern sample count must be >= 1");
        const RadomeConfig &cfg = model.config();
        auto powers = [&](const Direction &dir, PowerSample &acc) {
            const double g = std::norm(los_coefficient(dir.elevation, cfg));
            const DirectionResponse resp = model.response(dir);
            const CVector h = model.earv(resp, pattern);
            acc.effective += g * h.squaredNorm();
            acc.reflection += g * (h - resp.direct).squaredNorm();
            acc.direct += g * resp.direct.squaredNorm();
        };

        PowerPatterns out;
        out.elevation.resize(static_cast<std::size_t>(samples));
        out.azimuth.resize(static_cast<std::size_t>(samples));
        for (int i = 0; i < samples; ++i)
        {
            PowerSample &e = out.elevation[static_cast<std::size_t>(i)];
            e.angle = (i + 0.5) * cfg.max_elevation / samples;
            for (int k = 0; k < samples; ++k)
                powers({e.angle, (k + 0.5) * (pi / 2.0) / samples}, e);
            e.effective /= samples;
            e.reflection /= samples;
            e.direct /= samples;

            PowerSample &a = out.azimuth[static_cast<std::size_t>(i)];
            a.angle = (i + 0.5) * 2.0 * pi / samples;
            powers({cfg.max_elevation, a.angle}, a);
        }
        return out;
    }

    double single_user_rate(const CVector &h, const LinkBudget &budget)
    {
        return std::log2(1.0 + budget.power * h.squaredNorm() / budget.noise);
    }

    double effective_rate_with_overhead(double rate, double overhead, double coherence)
    {
        if (overhead < 0.0)
            throw ConfigError("training overhead must be >= 0");
        if (!(coherence > 0.0))
            throw ConfigError("coherence time T_u must be positive");
        return std::max(0.0, 1.0 - overhead / coherence) * rate;
    }

    double sum_rate_mmse_sic(const std::vector<CVector> &channels, const LinkBudget &budget)
    {
        if (channels.empty())
            return 0.0;
        const Eigen::Index m = channels.front().size();
        CMatrix G = CMatrix::Identity(m, m);
        const double snr = budget.per_user_power() / budget.noise;
        for (const auto &h : channels)
        {
            if (h.size() != m)
                throw ConfigError("user channels differ in length");
            G.noalias() += snr * h * h.adjoint();
        }
        Eigen::LLT<CMatrix> llt(G);
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
            logdet += std::log2(std::real(llt.matrixL()(i, i)));
        return 2.0 * logdet;
    }

    // --- mobility ---

    int MobilityConfig::blocks_per_instant() const
    {
        if (blocks)
            return *blocks;
        return static_cast<int>(std::lround(1.0 / block_duration()));
    }

    void MobilityConfig::validate() const
    {
        if (!(speed > 0.0))
            throw ConfigError("mobility.v must be positive");
        if (!(carrier > 0.0))
            throw ConfigError("mobility.f_c must be positive");
        if (!(angular_speed > 0.0))
            throw ConfigError("mobility.omega must be positive");
        if (instants < 1)
            throw ConfigError("mobility.instants must be >= 1");
        if (blocks && *blocks < 1)
            throw ConfigError("mobility.blocks must be >= 1");
        if (holds.empty())
            throw ConfigError("mobility.T must list at least one hold duration");
        for (int t : holds)
            if (t < 1)
                throw ConfigError("mobility.T entries must be >= 1");
        if (sectors < 1)
            throw ConfigError("mobility.D must be >= 1");
    }

    namespace
    {
        // Index of the largest value, lowest index on ties
        std::size_t argmax(const std::vector<double> &v)
        {
            std::size_t best = 0;
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i] > v[best])
                    best = i;
            return best;
        }

        std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index)
        {
            return std::mt19937_64(derive_seed(derive_seed(seed, purpose), index));
        }
    }

    MobilityResult run_mobility(const ChannelModel &model, const Codebook &codebook, const MobilityConfig &mobility,
                                double kappa, int paths, const LinkBudget &budget, int trials, std::uint64_t seed,
                                int threads)
    {
        mobility.validate();
        budget.validate();
        if (trials < 1)
            throw ConfigError("trial count must be >= 1");
        if (codebook.size() == 0)
            throw ConfigError("empty codebook");

        const int instants = mobility.instants;
        const int blocks = mobility.blocks_per_instant();
        const double theta = model.config().max_elevation;
        auto azimuth = [&](int t, double b) { return (t - 1 + b / blocks) * mobility.angular_speed; };

        MobilityResult out;
        for (int t = 1; t <= instants; ++t)
        {
            out.instants.push_back(t);
            out.user_sector.push_back(sector_of(azimuth(t, blocks / 2.0), mobility.sectors));
        }
        for (int T : mobility.holds)
        {
            auto &held = out.held_sector[T];
            for (int t = 1; t <= instants; ++t)
            {
                const int chosen = t - (t - 1) % T;
                held.push_back(sector_of(azimuth(chosen, blocks / 2.0), mobility.sectors));
            }
        }

        out.fast_trials.assign(static_cast<std::size_t>(trials), std::vector<double>(static_cast<std::size_t>(instants)));
        for (int T : mobility.holds)
            out.slow_trials[T] = out.fast_trials;

        parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t trial) {
            std::mt19937_64 rng = stream(seed, 7, trial);
            std::map<int, std::size_t> held;
            std::vector<double> rates(codebook.size());
            for (int t = 1; t <= instants; ++t)
            {
                double fast = 0.0;
                std::map<int, double> slow;
                for (int b = 0; b < blocks; ++b)
                {
                    const Direction user{theta, azimuth(t, b)};
                    const auto r = draw_rician_realization(user, kappa, paths, model.config(), rng);
                    const DirectionResponse resp = combined_response(model, r);
                    for (std::size_t c = 0; c < codebook.size(); ++c)
                        rates[c] = single_user_rate(model.earv(resp, codebook[c]), budget);
                    const std::size_t best = argmax(rates);
                    fast += rates[best];
                    for (int T : mobility.holds)
                    {
                        if (b == 0 && (t - 1) % T == 0)
                            held[T] = best;
                        slow[T] += rates[held[T]];
                    }
                }
                const auto i = static_cast<std::size_t>(t - 1);
                out.fast_trials[trial][i] = fast / blocks;
                for (int T : mobility.holds)
                    out.slow_trials[T][trial][i] = slow[T] / blocks;
            }
        });

        auto mean = [&](const std::vector<std::vector<double>> &per_trial) {
            std::vector<double> m(static_cast<std::size_t>(instants), 0.0);
            for (const auto &row : per_trial)
                for (int i = 0; i < instants; ++i)
                    m[static_cast<std::size_t>(i)] += row[static_cast<std::size_t>(i)];
            for (double &v : m)
                v /= trials;
            return m;
        };
        out.fast = mean(out.fast_trials);
        for (int T : mobility.holds)
            out.slow[T] = mean(out.slow_trials[T]);
        return out;
    }

    // --- experiments ---

    const std::vector<std::string> &experiment_names()
    {
        static const std::vector<std::string> names{"coverage-vs-D", "rate-vs-D",      "rate-vs-kappa",
                                                    "overhead",      "mobility",       "multiuser-vs-X",
                                                    "sector-count-histogram"};
        return names;
    }

    void ExperimentConfig::validate() const
    {
        const auto &names = experiment_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
        {
            std::string list;
            for (const auto &n : names)
                list += (list.empty() ? "" : ", ") + n;
            throw ConfigError("experiment.name '" + name + "' is not one of: " + list);
        }
        if (trials < 1)
            throw ConfigError("experiment.trials must be >= 1");
        if (sectors.empty())
            throw ConfigError("experiment.D must list at least one sector count");
        for (int d : sectors)
            if (d < 1)
                throw ConfigError("experiment.D entries must be >= 1");
        if (rate_sectors < 1)
            throw ConfigError("experiment.D_kappa must be >= 1");
        if (paths < 1)
            throw ConfigError("experiment.Psi must be >= 1");
        if (paths < 2)
            throw ConfigError("experiment.Psi must be >= 2 for Rician channels");
        if (users < 1)
            throw ConfigError("experiment.K must be >= 1");
        if (kappa_axis_db.empty())
            throw ConfigError("experiment.kappa_dB_axis must not be empty");
        for (double t : coherence)
            if (!(t > 0.0))
                throw ConfigError("experiment.T_u entries must be positive");
        if (schemes.empty())
            throw ConfigError("experiment.schemes must not be empty");
        if (pattern_samples < 1)
            throw ConfigError("experiment.pattern_samples must be >= 1");
        if (union_sizes.empty())
            throw ConfigError("experiment.X must not be empty");
        if (budget)
            budget->validate();
        mobility.validate();
    }

    std::uint64_t ExperimentConfig::hash() const
    {
        Fnv1a h;
        h.add(name);
        for (int d : sectors)
            h.add(d);
        for (int x : union_sizes)
            h.add(x);
        for (double k : kappa_axis_db)
            h.add(k);
        h.add(kappa_db).add(rate_sectors);
        for (double t : coherence)
            h.add(t);
        h.add(paths).add(users).add(trials);
        for (Scheme s : schemes)
            h.add(to_string(s));
        h.add(static_cast<std::uint64_t>(dft_cap)).add(pattern_samples);
        if (budget)
            h.add(budget->power).add(budget->noise);
        h.add(mobility.speed).add(mobility.carrier).add(mobility.angular_speed).add(mobility.instants);
        h.add(mobility.blocks_per_instant()).add(mobility.sectors);
        for (int t : mobility.holds)
            h.add(t);
        return h.value();
    }

    const std::vector<double> &ExperimentResult::at(const std::string &name) const
    {
        for (const auto &[n, v] : series)
            if (n == name)
                return v;
        throw std::out_of_range("no series named '" + name + "'");
    }

    namespace
    {
        std::string number(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }
    }

    std::string ExperimentResult::csv() const
    {
        std::string out = axis_name;
        for (const auto &s : series)
            out += "," + s.first;
        out += "\n";
        for (std::size_t i = 0; i < axis.size(); ++i)
        {
            out += number(axis[i]);
            for (const auto &s : series)
                out += "," + number(s.second[i]);
            out += "\n";
        }
        return out;
    }

    std::string ExperimentResult::metadata() const
    {
        char hash[20];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash));
        nlohmann::ordered_json j;
        j["experiment"] = experiment;
        j["metric"] = metric;
        j["axis"] = axis_name;
        j["config_hash"] = hash;
        j["seed"] = seed;
        j["trials"] = trials;
        j["version"] = version_string;
        std::vector<std::string> names;
        for (const auto &s : series)
            names.push_back(s.first);
        j["series"] = names;
        return j.dump(2) + "\n";
    }

    void ExperimentResult::write(const std::filesystem::path &dir) const
    {
        std::filesystem::create_directories(dir);
        auto put = [](const std::filesystem::path &p, const std::string &text) {
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
            f << text;
        };
        put(dir / (experiment + ".csv"), csv());
        put(dir / (experiment + ".meta.json"), metadata());
    }

    CodebookStore::CodebookStore(const ChannelModel &model, AOConfig ao, std::uint64_t seed, int threads)
        : model_(model), ao_(std::move(ao)), seed_(seed), threads_(threads)
    {
    }

    void CodebookStore::add(Codebook codebook)
    {
        if (codebook.geometry_hash != model_.geometry().hash())
            throw HashMismatchError("codebook was designed for another geometry");
        if (codebook.kind == CodebookKind::MultiUser)
        {
            // split a union back into its C_D parts
            std::map<int, Codebook> parts;
            for (auto &e : codebook.entries)
            {
                auto &p = parts[e.sectors];
                p.kind = CodebookKind::SingleUser;
                p.aggregation = codebook.aggregation;
                p.geometry_hash = codebook.geometry_hash;
                p.seed = codebook.seed;
                p.entries.push_back(e);
            }
            for (auto &[d, p] : parts)
                add(std::move(p));
            return;
        }
        if (codebook.kind != CodebookKind::SingleUser || codebook.size() == 0)
            throw ConfigError("only designed codebooks can serve as the proposed scheme");
        const int d = static_cast<int>(codebook.size());
        for (std::size_t i = 0; i < codebook.size(); ++i)
            if (codebook.entries[i].sectors != d || codebook.entries[i].sector != static_cast<int>(i) + 1)
                throw ConfigError("codebook entries are not ordered sectors 1..D of one division");
        books_[d] = std::move(codebook);
    }

    const Codebook &CodebookStore::get(int sectors)
    {
        auto it = books_.find(sectors);
        if (it == books_.end())
            it = books_.emplace(sectors, build_single_user_codebook(model_, sectors, ao_, codebook_seed(seed_, sectors), threads_))
                     .first;
        return it->second;
    }

    Codebook CodebookStore::union_of(const std::vector<int> &sectors)
    {
        std::vector<Codebook> parts;
        for (int d : sectors)
            parts.push_back(get(d));
        return union_codebook(parts);
    }

    namespace
    {
        // One user's multipath channel resolved for both the IRS model and the IRS-free model
        struct UserChannel
        {
            DirectionResponse full;
            DirectionResponse bare;

            const DirectionResponse &for_model(const ChannelModel &m) const { return m.element_count() == 0 ? bare : full; }
        };

        UserChannel resolve(const ChannelModel &model, const ChannelModel &bare, const ChannelRealization &r)
        {
            return {combined_response(model, r), combined_response(bare, r)};
        }

        ChannelRealization cell_edge_user(const ChannelModel &model, double kappa, int paths, std::mt19937_64 &rng)
        {
            std::uniform_real_distribution<double> phi(0.0, 2.0 * pi);
            const Direction user{model.config().max_elevation, phi(rng)};
            return draw_rician_realization(user, kappa, paths, model.config(), rng);
        }

        Metric power_metric(const UserChannel &u)
        {
            return [&u](const ChannelModel &m, const ReflectionPattern &p) { return m.earv(u.for_model(m), p).squaredNorm(); };
        }

        Metric sum_rate_metric(const std::vector<UserChannel> &users, const LinkBudget &budget)
        {
            return [&users, budget](const ChannelModel &m, const ReflectionPattern &p) {
                std::vector<CVector> h;
                h.reserve(users.size());
                for (const auto &u : users)
                    h.push_back(m.earv(u.for_model(m), p));
                return sum_rate_mmse_sic(h, budget);
            };
        }

        Codebook materialize_dft(const ChannelModel &model, std::size_t cap)
        {
            const CandidateSet set = CandidateSet::dft(model, cap);
            Codebook cb;
            cb.kind = CodebookKind::Benchmark;
            cb.geometry_hash = model.geometry().hash();
            cb.entries.resize(set.size());
            for (std::size_t i = 0; i < set.size(); ++i)
                cb.entries[i].pattern = set.pattern(i);
            return cb;
        }

        bool wants(const ExperimentConfig &cfg, Scheme s)
        {
            return std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end();
        }

        // Shared state of one experiment run
        struct Runner
        {
            const ChannelModel &model;
            const ExperimentConfig &cfg;
            CodebookStore &store;
            std::uint64_t seed;
            int threads;
            ChannelModel bare;
            std::optional<Codebook> dft;

            Runner(const ChannelModel &m, const ExperimentConfig &c, CodebookStore &s, std::uint64_t sd, int th)
                : model(m), cfg(c), store(s), seed(sd), threads(th), bare(m.without_irs())
            {
            }

            const Codebook &dft_codebook()
            {
                if (!dft)
                    dft = materialize_dft(model, cfg.dft_cap);
                return *dft;
            }

            // Performance of `scheme` under the metric; `random` is the trial's random codebook
            double best(Scheme scheme, const Metric &metric, const Codebook *proposed, const Codebook *random, int workers = 1)
            {
                switch (scheme)
                {
                case Scheme::Proposed:
                    return evaluate_scheme(CandidateSet::from_codebook(scheme, model, *proposed), metric, workers).value;
                case Scheme::RandomCodebook:
                    return evaluate_scheme(CandidateSet::from_codebook(scheme, model, *random), metric, workers).value;
                case Scheme::DftCodebook:
                    return evaluate_scheme(CandidateSet::from_codebook(scheme, model, dft_codebook()), metric, workers).value;
                case Scheme::Unity:
                    return evaluate_scheme(CandidateSet::unity(model), metric).value;
                case Scheme::NoIrs:
                    return metric(bare, ReflectionPattern::unity({0, 0, 0, 0}));
                }
                return 0.0;
            }

            LinkBudget budget(int users) const
            {
                LinkBudget b = cfg.budget ? *cfg.budget : calibrated_budget(model.config(), users);
                b.users = users;
                return b;
            }

            ExperimentResult start(const std::string &metric, const std::string &axis_name) const
            {
                ExperimentResult r;
                r.experiment = cfg.name;
                r.metric = metric;
                r.axis_name = axis_name;
                r.trials = cfg.trials;
                r.seed = seed;
                Fnv1a h;
                h.add(cfg.hash()).add(model.geometry().hash());
                r.config_hash = h.value();
                return r;
            }

            // Runs body(trial, out) on every trial and averages the per-trial vectors in trial order
            template <typename Body>
            std::vector<double> average(std::size_t width, Body &&body)
            {
                std::vector<std::vector<double>> rows(static_cast<std::size_t>(cfg.trials), std::vector<double>(width, 0.0));
                parallel_for(rows.size(), threads, [&](std::size_t t) { body(t, rows[t]); });
                std::vector<double> mean(width, 0.0);
                for (const auto &row : rows)
                    for (std::size_t i = 0; i < width; ++i)
                        mean[i] += row[i];
                for (double &v : mean)
                    v /= cfg.trials;
                return mean;
            }

            ExperimentResult coverage();
            ExperimentResult rate_vs_sectors(bool overhead);
            ExperimentResult rate_vs_kappa();
            ExperimentResult mobility();
            ExperimentResult multiuser();
            ExperimentResult histogram();
        };

        // Sector-averaged SMAECP; proposed codewords serve their own sectors, benchmark sets pick per sector.
        // Only the random codebook is stochastic, so it alone is averaged over trials.
        ExperimentResult Runner::coverage()
        {
            ExperimentResult res = start("average SMAECP (dB)", "D");
            const int L = store.ao().samples;
            std::map<Scheme, std::vector<double>> values;
            for (int D : cfg.sectors)
            {
                res.axis.push_back(D);
                std::vector<SectorSamples> samples;
                for (int d = 1; d <= D; ++d)
                    samples.push_back(sector_samples(model, SectorSpec{D, d}, L));
                const std::vector<SectorSamples> bare_samples = [&] {
                    std::vector<SectorSamples> s;
                    for (int d = 1; d <= D; ++d)
                        s.push_back(sector_samples(bare, SectorSpec{D, d}, L));
                    return s;
                }();
                auto metric_for = [&](int d) -> Metric {
                    return [&, d](const ChannelModel &m, const ReflectionPattern &p) {
                        return smaecp(m, m.element_count() == 0 ? bare_samples[d - 1] : samples[d - 1], p);
                    };
                };

                for (Scheme s : cfg.schemes)
                {
                    double total = 0.0;
                    if (s == Scheme::Proposed)
                    {
                        const Codebook &cb = store.get(D);
                        for (int d = 1; d <= D; ++d)
                            total += smaecp(model, samples[d - 1], cb[d - 1]);
                        total /= D;
                    }
                    else if (s == Scheme::RandomCodebook)
                    {
                        const auto mean = average(1, [&](std::size_t t, std::vector<double> &out) {
                            std::mt19937_64 rng = stream(seed, 1, t * 1000 + static_cast<std::size_t>(D));
                            const Codebook cb = random_codebook(D, model.geometry().element_counts(), rng);
                            for (int d = 1; d <= D; ++d)
                                out[0] += best(s, metric_for(d), nullptr, &cb);
                            out[0] /= D;
                        });
                        total = mean[0];
                    }
                    else
                    {
                        for (int d = 1; d <= D; ++d)
                            total += best(s, metric_for(d), nullptr, nullptr, threads);
                        total /= D;
                    }
                    values[s].push_back(to_db(total));
                }
            }
            for (Scheme s : cfg.schemes)
                res.series.emplace_back(to_string(s), values[s]);
            return res;
        }

        ExperimentResult Runner::rate_vs_sectors(bool overhead)
        {
            ExperimentResult res = start(overhead ? "rate with training overhead (bits/s/Hz)" : "rate (bits/s/Hz)", "D");
            const LinkBudget link = budget(1);
            const double kappa = from_db(cfg.kappa_db);
            std::vector<Scheme> schemes = overhead ? std::vector<Scheme>{Scheme::Proposed} : cfg.schemes;
            std::vector<const Codebook *> books;
            for (int D : cfg.sectors)
            {
                res.axis.push_back(D);
                books.push_back(&store.get(D));
            }
            if (wants(cfg, Scheme::DftCodebook) && !overhead)
                dft_codebook();

            const std::size_t nd = cfg.sectors.size();
            const std::size_t ns = schemes.size();
            const std::size_t nt = cfg.coherence.size();
            const std::size_t width = overhead ? nd * nt : nd * ns;
            const auto mean = average(width, [&](std::size_t t, std::vector<double> &out) {
                std::mt19937_64 rng = stream(seed, 2, t);
                const UserChannel user = resolve(model, bare, cell_edge_user(model, kappa, cfg.paths, rng));
                const Metric metric = power_metric(user);
                auto rate = [&](double power) { return std::log2(1.0 + link.power * power / link.noise); };
                std::mt19937_64 random_rng = stream(seed, 3, t);
                std::map<Scheme, double> fixed; // schemes whose candidate set does not depend on D
                for (std::size_t k = 0; k < nd; ++k)
                {
                    const int D = cfg.sectors[k];
                    const Codebook random = random_codebook(D, model.geometry().element_counts(), random_rng);
                    for (std::size_t s = 0; s < ns; ++s)
                    {
                        const Scheme scheme = schemes[s];
                        double r = 0.0;
                        if (scheme == Scheme::Proposed || scheme == Scheme::RandomCodebook)
                            r = rate(best(scheme, metric, books[k], &random));
                        else
                        {
                            if (!fixed.count(scheme))
                                fixed[scheme] = rate(best(scheme, metric, nullptr, nullptr));
                            r = fixed[scheme];
                        }
                        if (overhead)
                            for (std::size_t c = 0; c < nt; ++c)
                                out[k * nt + c] = effective_rate_with_overhead(r, D, cfg.coherence[c]);
                        else
                            out[k * ns + s] = r;
                    }
                }
            });

            if (overhead)
                for (std::size_t c = 0; c < nt; ++c)
                {
                    std::vector<double> v;
                    for (std::size_t k = 0; k < nd; ++k)
                        v.push_back(mean[k * nt + c]);
                    res.series.emplace_back("T_u=" + number(cfg.coherence[c]), v);
                }
            else
                for (std::size_t s = 0; s < ns; ++s)
                {
                    std::vector<double> v;
                    for (std::size_t k = 0; k < nd; ++k)
                        v.push_back(mean[k * ns + s]);
                    res.series.emplace_back(to_string(schemes[s]), v);
                }
            return res;
        }

        // Common random numbers: one realization per trial, rescaled to every kappa
        ExperimentResult Runner::rate_vs_kappa()
        {
            ExperimentResult res = start("rate (bits/s/Hz)", "kappa_dB");
            const LinkBudget link = budget(1);
            res.axis = cfg.kappa_axis_db;
            const Codebook &proposed = store.get(cfg.rate_sectors);
            if (wants(cfg, Scheme::DftCodebook))
                dft_codebook();
            const std::size_t nk = res.axis.size();
            const std::size_t ns = cfg.schemes.size();
            const auto mean = average(nk * ns, [&](std::size_t t, std::vector<double> &out) {
                std::mt19937_64 rng = stream(seed, 4, t);
                const ChannelRealization base = cell_edge_user(model, from_db(res.axis[0]), cfg.paths, rng);
                std::mt19937_64 random_rng = stream(seed, 5, t);
                const Codebook random = random_codebook(cfg.rate_sectors, model.geometry().element_counts(), random_rng);
                for (std::size_t k = 0; k < nk; ++k)
                {
                    const UserChannel user = resolve(model, bare, with_rician_factor(base, from_db(res.axis[k])));
                    const Metric metric = power_metric(user);
                    for (std::size_t s = 0; s < ns; ++s)
                        out[k * ns + s] = std::log2(1.0 + link.power * best(cfg.schemes[s], metric, &proposed, &random) / link.noise);
                }
            });
            for (std::size_t s = 0; s < ns; ++s)
            {
                std::vector<double> v;
                for (std::size_t k = 0; k < nk; ++k)
                    v.push_back(mean[k * ns + s]);
                res.series.emplace_back(to_string(cfg.schemes[s]), v);
            }
            return res;
        }

        ExperimentResult Runner::mobility()
        {
            ExperimentResult res = start("per-instant mean rate (bits/s/Hz)", "t");
            const Codebook &cb = store.get(cfg.mobility.sectors);
            const MobilityResult m =
                run_mobility(model, cb, cfg.mobility, from_db(cfg.kappa_db), cfg.paths, budget(1), cfg.trials, seed, threads);
            for (int t : m.instants)
                res.axis.push_back(t);
            res.series.emplace_back("fast", m.fast);
            for (const auto &[T, v] : m.slow)
                res.series.emplace_back("slow-T" + std::to_string(T), v);
            res.series.emplace_back("user-sector", std::vector<double>(m.user_sector.begin(), m.user_sector.end()));
            for (const auto &[T, v] : m.held_sector)
                res.series.emplace_back("held-sector-T" + std::to_string(T), std::vector<double>(v.begin(), v.end()));
            return res;
        }

        // X axis values must be prefix sums of the sector-count list
        std::vector<std::vector<int>> union_parts(const ExperimentConfig &cfg)
        {
            std::vector<std::vector<int>> parts;
            for (int x : cfg.union_sizes)
            {
                std::vector<int> prefix;
                int sum = 0;
                for (int d : cfg.sectors)
                {
                    if (sum == x)
                        break;
                    prefix.push_back(d);
                    sum += d;
                }
                if (sum != x)
                    throw ConfigError("experiment.X value " + std::to_string(x) + " is not a prefix sum of experiment.D");
                parts.push_back(prefix);
            }
            return parts;
        }

        std::vector<UserChannel> draw_users(const ChannelModel &model, const ChannelModel &bare, int users, double kappa,
                                            int paths, std::mt19937_64 &rng)
        {
            std::vector<UserChannel> out;
            for (int k = 0; k < users; ++k)
                out.push_back(resolve(model, bare, cell_edge_user(model, kappa, paths, rng)));
            return out;
        }

        ExperimentResult Runner::multiuser()
        {
            ExperimentResult res = start("sum rate (bits/s/Hz)", "X");
            const LinkBudget link = budget(cfg.users);
            std::vector<Codebook> unions;
            for (const auto &parts : union_parts(cfg))
            {
                unions.push_back(store.union_of(parts));
                res.axis.push_back(static_cast<double>(unions.back().size()));
            }
            if (wants(cfg, Scheme::DftCodebook))
                dft_codebook();
            const std::size_t nx = unions.size();
            const std::size_t ns = cfg.schemes.size();
            const double kappa = from_db(cfg.kappa_db);
            const auto mean = average(nx * ns, [&](std::size_t t, std::vector<double> &out) {
                std::mt19937_64 rng = stream(seed, 6, t);
                const auto users = draw_users(model, bare, cfg.users, kappa, cfg.paths, rng);
                const Metric metric = sum_rate_metric(users, link);
                std::mt19937_64 random_rng = stream(seed, 8, t);
                std::map<Scheme, double> fixed;
                for (std::size_t k = 0; k < nx; ++k)
                {
                    const Codebook random = random_codebook(unions[k].size(), model.geometry().element_counts(), random_rng);
                    for (std::size_t s = 0; s < ns; ++s)
                    {
                        const Scheme scheme = cfg.schemes[s];
                        if (scheme == Scheme::Proposed || scheme == Scheme::RandomCodebook)
                            out[k * ns + s] = best(scheme, metric, &unions[k], &random);
                        else
                        {
                            if (!fixed.count(scheme))
                                fixed[scheme] = best(scheme, metric, nullptr, nullptr);
                            out[k * ns + s] = fixed[scheme];
                        }
                    }
                }
            });
            for (std::size_t s = 0; s < ns; ++s)
            {
                std::vector<double> v;
                for (std::size_t k = 0; k < nx; ++k)
                    v.push_back(mean[k * ns + s]);
                res.series.emplace_back(to_string(cfg.schemes[s]), v);
            }
            return res;
        }

        // Probability that the best codeword of the union codebook comes from C_D, LoS-only channels
        ExperimentResult Runner::histogram()
        {
            ExperimentResult res = start("probability of optimal D", "D");
            const Codebook all = store.union_of(cfg.sectors);
            const std::size_t nd = cfg.sectors.size();
            for (int d : cfg.sectors)
                res.axis.push_back(d);
            const double kappa = std::numeric_limits<double>::infinity();
            const LinkBudget multi = budget(cfg.users);
            auto slot = [&](std::size_t index) {
                const int D = all.entries[index].sectors;
                return static_cast<std::size_t>(std::find(cfg.sectors.begin(), cfg.sectors.end(), D) - cfg.sectors.begin());
            };
            const auto mean = average(2 * nd, [&](std::size_t t, std::vector<double> &out) {
                std::mt19937_64 rng = stream(seed, 9, t);
                const auto single = draw_users(model, bare, 1, kappa, cfg.paths, rng);
                const auto group = draw_users(model, bare, cfg.users, kappa, cfg.paths, rng);
                const CandidateSet set = CandidateSet::from_codebook(Scheme::Proposed, model, all);
                out[slot(evaluate_scheme(set, power_metric(single[0])).index)] = 1.0;
                out[nd + slot(evaluate_scheme(set, sum_rate_metric(group, multi)).index)] = 1.0;
            });
            res.series.emplace_back("single-user", std::vector<double>(mean.begin(), mean.begin() + static_cast<long>(nd)));
            res.series.emplace_back("multi-user", std::vector<double>(mean.begin() + static_cast<long>(nd), mean.end()));
            return res;
        }
    }

    ExperimentResult run_experiment(const ChannelModel &model, const ExperimentConfig &cfg, CodebookStore &store,
                                    std::uint64_t seed, int threads)
    {
        cfg.validate();
        Runner run(model, cfg, store, seed, threads);
        if (cfg.name == "coverage-vs-D")
            return run.coverage();
        if (cfg.name == "rate-vs-D")
            return run.rate_vs_sectors(false);
        if (cfg.name == "overhead")
            return run.rate_vs_sectors(true);
        if (cfg.name == "rate-vs-kappa")
            return run.rate_vs_kappa();
        if (cfg.name == "mobility")
            return run.mobility();
        if (cfg.name == "multiuser-vs-X")
            return run.multiuser();
        return run.histogram();
    }
}
