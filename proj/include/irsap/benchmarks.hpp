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


#ifndef IRSAP_BENCHMARKS_HPP
#define IRSAP_BENCHMARKS_HPP

#include "irsap/codebook.hpp"

#include <functional>
#include <memory>

namespace irsap
{
    enum class Scheme
    {
        Proposed,
        RandomCodebook,
        DftCodebook,
        Unity,
        NoIrs,
    };

    std::string to_string(Scheme s);
    Scheme scheme_from_string(const std::string &s);

    // Codewords with i.i.d. phases uniform on [0, 2 pi)
    Codebook random_codebook(std::size_t size, const std::array<int, irs_count> &counts, std::mt19937_64 &rng);

    // DFT matrix with entry (a, b) = exp(-i 2 pi a b / n); its columns are the codewords
    CMatrix dft_matrix(int n);

    // Per-IRS 2D DFT codeword sets W_j = {w_1 (x) w_2}; the joint search space is their Cartesian product
    struct DftCodebook
    {
        std::array<int, irs_count> counts{};
        std::array<std::vector<RVector>, irs_count> phases; // per IRS, per codeword, element phases

        std::size_t joint_size() const;
        // Mixed-radix decoding of a joint index, IRS 1 least significant
        ReflectionPattern joint(std::size_t index) const;
    };

    DftCodebook dft_codebook(const RadomeGeometry &geom);

    // Candidate set a scheme selects from, bound to the channel model its patterns apply to.
    // The no-IRS scheme carries its own IRS-free model and a single empty pattern.
    class CandidateSet
    {
    public:
        static CandidateSet from_codebook(Scheme scheme, const ChannelModel &model, const Codebook &codebook);
        static CandidateSet unity(const ChannelModel &model);
        static CandidateSet no_irs(const ChannelModel &model);
        // Throws ConfigError naming the cost when the joint product exceeds `cap`
        static CandidateSet dft(const ChannelModel &model, std::size_t cap = 100000);

        Scheme scheme() const { return scheme_; }
        const ChannelModel &model() const { return *model_; }
        std::size_t size() const { return size_; }
        ReflectionPattern pattern(std::size_t i) const { return at_(i); }

    private:
        Scheme scheme_ = Scheme::Unity;
        std::shared_ptr<const ChannelModel> model_;
        std::size_t size_ = 0;
        std::function<ReflectionPattern(std::size_t)> at_;
    };

    // Performance of a pattern under the model it belongs to; larger is better
    using Metric = std::function<double(const ChannelModel &, const ReflectionPattern &)>;

    struct Selection
    {
        std::size_t index = 0;
        double value = 0.0;
        ReflectionPattern pattern;
    };

    // Exhaustive argmax over the candidate set; ties resolve to the lowest index
    Selection evaluate_scheme(const CandidateSet &candidates, const Metric &metric, int threads = 1);
}

#endif
