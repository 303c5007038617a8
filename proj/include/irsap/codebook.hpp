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


#ifndef IRSAP_CODEBOOK_HPP
#define IRSAP_CODEBOOK_HPP

#include "irsap/channel.hpp"
#include "irsap/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace irsap
{
    // Azimuth wedge d of D: [(d-1) 2 pi / D, d 2 pi / D) at every elevation up to theta_max. d is 1-based.
    struct SectorSpec
    {
        int count = 1;
        int index = 1;

        double lower() const { return (index - 1) * 2.0 * pi / count; }
        double upper() const { return index * 2.0 * pi / count; }
        bool contains(double azimuth) const;
        void validate() const;
    };

    // 1-based sector holding the azimuth (wrapped into [0, 2 pi))
    int sector_of(double azimuth, int count);

    // Midpoint samples phi_l = (d-1) 2 pi / D + (l - 1/2) 2 pi / (D L), l = 1..L
    std::vector<double> sample_azimuths(const SectorSpec &sector, int samples);

    enum class Aggregation
    {
        AveragePower,   // mean over samples of |B_l theta + c_l|^2, the discretized SMAECP itself
        PowerOfAverage, // |mean(B_l) theta + mean(c_l)|^2
    };

    std::string to_string(Aggregation a);
    Aggregation aggregation_from_string(const std::string &s);

    struct AOConfig
    {
        int samples = 40;           // L
        int inits = 100;            // Gamma, random starting patterns
        double epsilon = 1e-5;      // relative objective increase that stops the sweeps
        int max_iterations = 100;   // I_max
        int randomizations = 1000;  // Gamma_r
        Aggregation aggregation = Aggregation::AveragePower;
        bool guarded = true;        // keep the previous IRS phases when the randomized update lowers the objective
        SdpOptions sdp;

        void validate() const;
    };

    // LoS responses at theta_max over a sector's sample azimuths
    struct SectorSamples
    {
        SectorSpec sector;
        cplx los = 0.0; // a_1(theta_max)
        std::vector<double> azimuths;
        std::vector<DirectionResponse> responses;
    };

    SectorSamples sector_samples(const ChannelModel &model, const SectorSpec &sector, int samples);

    // Discretized SMAECP: (1/L) sum_l |a_1(theta_max)|^2 |h(theta_max, phi_l, Theta)|^2
    double smaecp(const ChannelModel &model, const SectorSamples &samples, const ReflectionPattern &pattern);
    double smaecp(const ChannelModel &model, const ReflectionPattern &pattern, const SectorSpec &sector, int samples);

    // Per-sample linear dependence of the LoS channel on IRS j with the other IRSs frozen:
    // a_1 h(theta_max, phi_l, Theta) = B[l] theta_j + c[l]
    struct Subproblem
    {
        int irs = 0;
        std::vector<CMatrix> B;
        std::vector<CVector> c;
    };

    Subproblem assemble_subproblem(const ChannelModel &model, const SectorSamples &samples,
                                   const ReflectionPattern &pattern, int irs);

    // The lifted matrix plus the constant completing the objective: objective = lifted_value + constant
    struct AggregatedSubproblem
    {
        LiftedProblem lifted;
        double constant = 0.0;
    };

    AggregatedSubproblem aggregate(const Subproblem &sub, Aggregation mode);

    struct SubproblemRecord
    {
        int sweep = 0;
        int irs = 0;
        double relaxed_value = 0.0;
        double upper_bound = 0.0;
        double relative_gap = 0.0;
        double randomized_value = 0.0; // lifted value of the randomized candidate
        bool rank_one = false;
        bool accepted = false;
    };

    struct DesignResult
    {
        ReflectionPattern pattern;
        std::vector<double> trace; // SMAECP of the starting point, then after every sweep
        int sweeps = 0;
        std::vector<SubproblemRecord> subproblems;

        double objective() const { return trace.back(); }
    };

    // Alternating optimization of one sector's codeword: best of Gamma random starts, then per-IRS SDR sweeps
    DesignResult design_codeword(const ChannelModel &model, const SectorSpec &sector, const AOConfig &ao,
                                 std::mt19937_64 &rng);

    enum class CodebookKind
    {
        SingleUser,
        MultiUser,
        Benchmark,
    };

    struct CodebookEntry
    {
        ReflectionPattern pattern;
        int sectors = 0; // D of the sector division the codeword was designed for (0 for benchmarks)
        int sector = 0;  // d
        double objective = 0.0;
        std::uint64_t seed = 0;
        int sweeps = 0;
    };

    struct Codebook
    {
        CodebookKind kind = CodebookKind::SingleUser;
        Aggregation aggregation = Aggregation::AveragePower;
        std::uint64_t geometry_hash = 0;
        std::uint64_t seed = 0;
        std::vector<CodebookEntry> entries;

        std::size_t size() const { return entries.size(); }
        const ReflectionPattern &operator[](std::size_t i) const { return entries[i].pattern; }
    };

    // Seed of C_D under a base seed; sector d then uses seed + d
    std::uint64_t codebook_seed(std::uint64_t base, int sectors);

    // C_D = {Theta*_{D,d}}; sectors are designed independently on up to `threads` workers
    Codebook build_single_user_codebook(const ChannelModel &model, int sectors, const AOConfig &ao, std::uint64_t seed,
                                        int threads = 1);

    // Union of single-user codebooks in the given order; rejects repeated D
    Codebook union_codebook(const std::vector<Codebook> &parts);

    // C~_X = union of C_D over D in the list (X = sum of D), C_D seeded with codebook_seed(seed, D)
    Codebook build_multi_user_codebook(const ChannelModel &model, const std::vector<int> &sector_counts,
                                       const AOConfig &ao, std::uint64_t seed, int threads = 1);
}

#endif
