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


#ifndef IRSAP_EVAL_HPP
#define IRSAP_EVAL_HPP

#include "irsap/benchmarks.hpp"

#include <filesystem>
#include <map>
#include <optional>

namespace irsap
{
    struct LinkBudget
    {
        double power = 1.0; // P, shared equally as p_k = P / K
        double noise = 1.0; // sigma^2
        int users = 1;      // K

        double per_user_power() const { return power / users; }
        void validate() const;
    };

    // P / sigma^2 chosen so that a no-IRS user at theta_max sees 0 dB SNR
    LinkBudget calibrated_budget(const RadomeConfig &cfg, int users = 1);

    // --- power patterns ---

    struct PowerSample
    {
        double angle = 0.0;
        double effective = 0.0;  // |a_1|^2 |h|^2
        double reflection = 0.0; // |a_1|^2 |h - h_d|^2
        double direct = 0.0;     // |a_1|^2 |h_d|^2
    };

    struct PowerPatterns
    {
        std::vector<PowerSample> elevation; // theta in (0, theta_max), each averaged over phi in [0, pi/2]
        std::vector<PowerSample> azimuth;   // phi in [0, 2 pi) at theta_max
    };

    // Midpoint rule with `samples` points on every axis
    PowerPatterns power_patterns(const ChannelModel &model, const ReflectionPattern &pattern, int samples = 180);

    // --- rates ---

    // log2(1 + P |h|^2 / sigma^2)
    double single_user_rate(const CVector &h, const LinkBudget &budget);

    // max(0, 1 - overhead / coherence) * rate
    double effective_rate_with_overhead(double rate, double overhead, double coherence);

    // log2 det(I + sum_k (p_k / sigma^2) h_k h_k^H)
    double sum_rate_mmse_sic(const std::vector<CVector> &channels, const LinkBudget &budget);

    // --- mobility ---

    struct MobilityConfig
    {
        double speed = 2.0;               // v, m/s
        double carrier = 6e9;             // f_c, Hz
        double angular_speed = pi / 36.0; // rad/s at theta_max
        int instants = 18;                // 1 s instants
        std::optional<int> blocks;        // fading blocks per instant, derived from the Doppler spread when unset
        std::vector<int> holds{3, 6};     // slow-adaptation durations T, s
        int sectors = 8;                  // D of the codebook used

        double max_doppler() const { return speed * carrier / 299792458.0; }
        double block_duration() const { return 1.0 / (10.0 * max_doppler()); }
        int blocks_per_instant() const;
        void validate() const;
    };

    struct MobilityResult
    {
        std::vector<int> instants;                  // t = 1..instants
        std::vector<double> fast;                   // per-instant mean rate, best codeword every block
        std::map<int, std::vector<double>> slow;    // per T
        std::vector<int> user_sector;               // geometric sector of the user at the start of the instant
        std::map<int, std::vector<int>> held_sector; // sector of the codeword held under the nominal selection
        // per trial, per instant
        std::vector<std::vector<double>> fast_trials;
        std::map<int, std::vector<std::vector<double>>> slow_trials;
    };

    // Rician channel per fading block (kappa linear), user at theta_max moving along phi(t).
    // Fast and slow modes see identical channel draws.
    MobilityResult run_mobility(const ChannelModel &model, const Codebook &codebook, const MobilityConfig &mobility,
                                double kappa, int paths, const LinkBudget &budget, int trials, std::uint64_t seed,
                                int threads = 1);

    // --- experiments ---

    struct ExperimentConfig
    {
        std::string name = "coverage-vs-D";
        std::vector<int> sectors{1, 2, 4, 8};          // D axis, and the D list of the union codebook
        std::vector<int> union_sizes{1, 3, 7, 15};     // X axis: unions of the first C_D in `sectors`
        std::vector<double> kappa_axis_db{0, 5, 10, 15, 20};
        double kappa_db = 10.0;
        int rate_sectors = 4;                          // D used by rate-vs-kappa
        std::vector<double> coherence{10, 20, 100};    // T_u values of the overhead experiment
        int paths = 5;                                 // Psi
        int users = 4;                                 // K of the multi-user experiments
        int trials = 100;
        std::vector<Scheme> schemes{Scheme::Proposed, Scheme::RandomCodebook, Scheme::DftCodebook, Scheme::Unity,
                                    Scheme::NoIrs};
        std::size_t dft_cap = 100000;
        int pattern_samples = 180;
        std::optional<LinkBudget> budget; // calibrated when unset
        MobilityConfig mobility;

        void validate() const;
        std::uint64_t hash() const;
    };

    const std::vector<std::string> &experiment_names();

    struct ExperimentResult
    {
        std::string experiment;
        std::string metric;
        std::string axis_name;
        std::vector<double> axis;
        std::vector<std::pair<std::string, std::vector<double>>> series;
        int trials = 0;
        std::uint64_t seed = 0;
        std::uint64_t config_hash = 0;

        const std::vector<double> &at(const std::string &name) const;
        std::string csv() const;
        std::string metadata() const; // JSON sidecar
        // Writes <dir>/<experiment>.csv and <dir>/<experiment>.meta.json
        void write(const std::filesystem::path &dir) const;
    };

    inline constexpr const char *version_string = "irsap 0.1.0";

    // Proposed codebooks keyed by D; missing ones are designed with codebook_seed(seed, D)
    class CodebookStore
    {
    public:
        CodebookStore(const ChannelModel &model, AOConfig ao, std::uint64_t seed, int threads = 1);

        void add(Codebook codebook); // single-user codebook, rejected on geometry mismatch
        const Codebook &get(int sectors);
        Codebook union_of(const std::vector<int> &sectors);
        const AOConfig &ao() const { return ao_; }

    private:
        const ChannelModel &model_;
        AOConfig ao_;
        std::uint64_t seed_;
        int threads_;
        std::map<int, Codebook> books_;
    };

    ExperimentResult run_experiment(const ChannelModel &model, const ExperimentConfig &cfg, CodebookStore &store,
                                    std::uint64_t seed, int threads = 1);

    inline double to_db(double linear) { return 10.0 * std::log10(linear); }
    inline double from_db(double db) { return std::pow(10.0, db / 10.0); }
}

#endif
