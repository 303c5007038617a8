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


#include "irsap/benchmarks.hpp"
#include "irsap/parallel.hpp"

#include <limits>

namespace irsap
{
    std::string to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::Proposed: return "proposed";
        case Scheme::RandomCodebook: return "random";
        case Scheme::DftCodebook: return "dft";
        case Scheme::Unity: return "unity";
        case Scheme::NoIrs: return "no-irs";
        }
        return "unknown";
    }

    Scheme scheme_from_string(const std::string &s)
    {
        for (Scheme k : {Scheme::Proposed, Scheme::RandomCodebook, Scheme::DftCodebook, Scheme::Unity, Scheme::NoIrs})
            if (to_string(k) == s)
                return k;
        throw ConfigError("unknown scheme '" + s + "' (proposed | random | dft | unity | no-irs)");
    }

    Codebook random_codebook(std::size_t size, const std::array<int, irs_count> &counts, std::mt19937_64 &rng)
    {
        if (size < 1)
            throw ConfigError("random codebook size must be >= 1");
        Codebook cb;
        cb.kind = CodebookKind::Benchmark;
        for (std::size_t i = 0; i < size; ++i)
        {
            CodebookEntry e;
            e.pattern = ReflectionPattern::random(counts, rng);
            cb.entries.push_back(std::move(e));
        }
        return cb;
    }

    CMatrix dft_matrix(int n)
    {
        CMatrix F(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                F(a, b) = std::polar(1.0, -2.0 * pi * ((static_cast<long>(a) * b) % n) / n);
        return F;
    }

    std::size_t DftCodebook::joint_size() const
    {
        std::size_t s = 1;
        for (const auto &set : phases)
            s *= set.size();
        return s;
    }

    ReflectionPattern DftCodebook::joint(std::size_t index) const
    {
        std::vector<double> ph;
        for (int j = 0; j < irs_count; ++j)
        {
            const auto &set = phases[j];
            const auto &w = set[index % set.size()];
            index /= set.size();
            ph.insert(ph.end(), w.data(), w.data() + w.size());
        }
        return ReflectionPattern::from_phases(counts, ph);
    }

    DftCodebook dft_codebook(const RadomeGeometry &geom)
    {
        DftCodebook cb;
        cb.counts = geom.element_counts();
        for (int j = 0; j < irs_count; ++j)
        {
            const auto &l = geom.irs(j);
            if (l.count() == 0)
            {
                cb.phases[j].push_back(RVector());
                continue;
            }
            // exponents add under the Kronecker product: phase(n1 N2 + n2) = -2 pi (a n1 / N1 + b n2 / N2)
            for (int a = 0; a < l.horizontal; ++a)
                for (int b = 0; b < l.vertical; ++b)
                {
                    RVector w(l.count());
                    for (int n1 = 0; n1 < l.horizontal; ++n1)
                        for (int n2 = 0; n2 < l.vertical; ++n2)
                            w[n1 * l.vertical + n2] = -2.0 * pi *
                                                      (static_cast<double>((a * n1) % l.horizontal) / l.horizontal +
                                                       static_cast<double>((b * n2) % l.vertical) / l.vertical);
                    cb.phases[j].push_back(w);
                }
        }
        return cb;
    }

    namespace
    {
        std::shared_ptr<const ChannelModel> borrow(const ChannelModel &m)
        {
            return std::shared_ptr<const ChannelModel>(&m, [](const ChannelModel *) {});
        }
    }

    CandidateSet CandidateSet::from_codebook(Scheme scheme, const ChannelModel &model, const Codebook &codebook)
    {
        if (codebook.size() == 0)
            throw ConfigError("empty codebook");
        CandidateSet s;
        s.scheme_ = scheme;
        s.model_ = borrow(model);
        s.size_ = codebook.size();
        s.at_ = [&codebook](std::size_t i) { return codebook[i]; };
        return s;
    }

    CandidateSet CandidateSet::unity(const ChannelModel &model)
    {
        CandidateSet s;
        s.scheme_ = Scheme::Unity;
        s.model_ = borrow(model);
        s.size_ = 1;
        const auto counts = model.geometry().element_counts();
        s.at_ = [counts](std::size_t) { return ReflectionPattern::unity(counts); };
        return s;
    }

    CandidateSet CandidateSet::no_irs(const ChannelModel &model)
    {
        CandidateSet s;
        s.scheme_ = Scheme::NoIrs;
        s.model_ = std::make_shared<const ChannelModel>(model.without_irs());
        s.size_ = 1;
        s.at_ = [](std::size_t) { return ReflectionPattern::unity({0, 0, 0, 0}); };
        return s;
    }

    CandidateSet CandidateSet::dft(const ChannelModel &model, std::size_t cap)
    {
        auto cb = std::make_shared<const DftCodebook>(dft_codebook(model.geometry()));
        const std::size_t size = cb->joint_size();
        if (size > cap)
            throw ConfigError("joint DFT search needs " + std::to_string(size) + " candidate evaluations per selection, above the cap of " +
                              std::to_string(cap) + "; raise dft_cap to accept the cost");
        CandidateSet s;
        s.scheme_ = Scheme::DftCodebook;
        s.model_ = borrow(model);
        s.size_ = size;
        s.at_ = [cb](std::size_t i) { return cb->joint(i); };
        return s;
    }

    Selection evaluate_scheme(const CandidateSet &candidates, const Metric &metric, int threads)
    {
        const std::size_t n = candidates.size();
        std::vector<double> values(n);
        parallel_for(n, threads, [&](std::size_t i) { values[i] = metric(candidates.model(), candidates.pattern(i)); });

        Selection best;
        best.value = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            if (values[i] > best.value)
            {
                best.value = values[i];
                best.index = i;
            }
        best.pattern = candidates.pattern(best.index);
        return best;
    }
}
