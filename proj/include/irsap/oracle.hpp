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


#ifndef IRSAP_ORACLE_HPP
#define IRSAP_ORACLE_HPP

#include "irsap/codebook.hpp"

#include <functional>

namespace irsap
{
    // Explicit term list of one direction's EARV: h = h_d + sum_a f_a x_a + sum_(a,b) g_ab x_a x_b.
    // Built straight from element and antenna positions, sharing no code with ChannelModel.
    struct TermExpansion
    {
        struct Pair
        {
            int first = 0;  // element hit first
            int second = 0; // element hit second, on another IRS
            CVector response;
        };

        CVector direct;
        std::vector<CVector> single; // per element
        std::vector<Pair> pairs;     // every ordered pair of elements on different IRSs

        std::size_t term_count() const { return 1 + single.size() + pairs.size(); }
        CVector evaluate(const CVector &coefficients) const;
    };

    TermExpansion term_expansion(const Direction &dir, const RadomeGeometry &geom);

    // h(dir, pattern) by enumerating every term
    CVector term_enumeration_earv(const Direction &dir, const ReflectionPattern &pattern, const RadomeGeometry &geom);

    struct QuantizedSearchSpec
    {
        int levels = 16;              // Q; phases 2 pi k / Q
        std::uint64_t cap = 1u << 20; // largest Q^N accepted
    };

    struct QuantizedOptimum
    {
        std::vector<int> levels; // k per element
        RVector phases;
        double value = 0.0;
        std::uint64_t evaluated = 0;
    };

    // Exact maximum of sum_l |B_l x + c_l|^2 over x_n = exp(i 2 pi k_n / Q); ties keep the first
    // assignment in lexicographic order of (k_1, ..., k_N)
    struct QuadraticSamples
    {
        std::vector<TermExpansion> samples;
        double scale = 1.0; // multiplies the summed power
    };

    QuantizedOptimum exhaustive_quantized_optimum(const QuadraticSamples &objective, const QuantizedSearchSpec &spec,
                                                  int threads = 1);

    // SMAECP of a sector over the quantized grid
    QuantizedOptimum exhaustive_quantized_optimum(const RadomeGeometry &geom, const SectorSpec &sector, int samples,
                                                  const QuantizedSearchSpec &spec, int threads = 1);

    // Lifted form theta~^H B~ theta~ with the last entry of theta~ pinned to 1
    QuantizedOptimum exhaustive_quantized_optimum(const LiftedProblem &problem, const QuantizedSearchSpec &spec);
}

#endif
