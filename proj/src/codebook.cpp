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


#include "irsap/codebook.hpp"
#include "irsap/parallel.hpp"
#include "irsap/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace irsap
{
    bool SectorSpec::contains(double azimuth) const
    {
        return azimuth >= lower() && azimuth < upper();
    }

    void SectorSpec::validate() const
    {
        if (count < 1)
            throw ConfigError("sector count must be >= 1");
        if (index < 1 || index > count)
            throw ConfigError("sector index " + std::to_string(index) + " outside 1.." + std::to_string(count));
    }

    int sector_of(double azimuth, int count)
    {
        double phi = std::fmod(azimuth, 2.0 * pi);
        if (phi < 0.0)
            phi += 2.0 * pi;
        const int d = static_cast<int>(std::floor(phi / (2.0 * pi / count))) + 1;
        // the boundary test must agree with SectorSpec::contains
        for (int k = std::max(1, d - 1); k <= std::min(count, d + 1); ++k)
            if (SectorSpec{count, k}.contains(phi))
                return k;
        return std::clamp(d, 1, count);
    }

    std::vector<double> sample_azimuths(const SectorSpec &sector, int samples)
    {
        sector.validate();
        if (samples < 1)
            throw ConfigError("azimuth sample count L must be >= 1");
        std::vector<double> phi(static_cast<std::size_t>(samples));
        const double width = 2.0 * pi / (sector.count * samples);
        for (int l = 1; l <= samples; ++l)
            phi[l - 1] = sector.lower() + (l - 0.5) * width;
        return phi;
    }

    std::string to_string(Aggregation a)
    {
        return a == Aggregation::AveragePower ? "average-power" : "power-of-average";
    }

    Aggregation aggregation_from_string(const std::string &s)
    {
        if (s == "average-power")
            return Aggregation::AveragePower;
        if (s == "power-of-average")
            return Aggregation::PowerOfAverage;
        throw ConfigError("unknown objective aggregation '" + s + "' (average-power | power-of-average)");
    }

    void AOConfig::validate() const
    {
        if (samples < 1)
            throw ConfigError("ao.L must be >= 1");
        if (inits < 1)
            throw ConfigError("ao.Gamma must be >= 1");
        if (!(epsilon > 0.0))
            throw ConfigError("ao.epsilon must be > 0");
        if (max_iterations < 1)
            throw ConfigError("ao.I_max must be >= 1");
        if (randomizations < 1)
            throw ConfigError("ao.Gamma_r must be >= 1");
    }

    SectorSamples sector_samples(const ChannelModel &model, const SectorSpec &sector, int samples)
    {
        SectorSamples s;
        s.sector = sector;
        const double theta = model.config().max_elevation;
        s.los = los_coefficient(theta, model.config());
        s.azimuths = sample_azimuths(sector, samples);
        for (double phi : s.azimuths)
            s.responses.push_back(model.response({theta, phi}));
        return s;
    }

    double smaecp(const ChannelModel &model, const SectorSamples &samples, const ReflectionPattern &pattern)
    {
        double sum = 0.0;
        for (const auto &r : samples.responses)
            sum += model.earv(r, pattern).squaredNorm();
        return std::norm(samples.los) * sum / static_cast<double>(samples.responses.size());
    }

    double smaecp(const ChannelModel &model, const ReflectionPattern &pattern, const SectorSpec &sector, int samples)
    {
        return smaecp(model, sector_samples(model, sector, samples), pattern);
    }

    Subproblem assemble_subproblem(const ChannelModel &model, const SectorSamples &samples,
                                   const ReflectionPattern &pattern, int irs)
    {
        const auto &geom = model.geometry();
        const auto &K = model.kernel().inter_element;
        const auto &R = model.kernel().to_antenna;
        const int off = geom.irs(irs).offset;
        const int nj = geom.irs(irs).count();

        // coefficients of the frozen IRSs, zero on IRS j
        CVector frozen = pattern.coefficients();
        frozen.segment(off, nj).setZero();

        // frozen couplings into IRS j: coupling(a, :) = sum_b K(a, b) theta_b R(b, :)
        const CMatrix coupling = K.middleRows(off, nj) * frozen.asDiagonal() * R;

        Subproblem sub;
        sub.irs = irs;
        for (const auto &r : samples.responses)
        {
            const CVector x = r.incidence.cwiseProduct(frozen);
            const CVector y = K.transpose() * x; // y_a = sum_b x_b K(b, a)
            CVector c = r.direct + R.transpose() * (x + frozen.cwiseProduct(y));

            const CVector sj = r.incidence.segment(off, nj);
            const CVector diag = sj + y.segment(off, nj);
            CMatrix B = R.middleRows(off, nj).transpose() * diag.asDiagonal();
            B += coupling.transpose() * sj.asDiagonal();

            sub.B.push_back(samples.los * B);
            sub.c.push_back(samples.los * c);
        }
        return sub;
    }

    AggregatedSubproblem aggregate(const Subproblem &sub, Aggregation mode)
    {
        const auto count = static_cast<double>(sub.B.size());
        AggregatedSubproblem out;
        if (mode == Aggregation::AveragePower)
        {
            out.lifted.matrix = CMatrix::Zero(sub.B.front().cols() + 1, sub.B.front().cols() + 1);
            for (std::size_t l = 0; l < sub.B.size(); ++l)
            {
                out.lifted.matrix += lift(sub.B[l], sub.c[l]).matrix;
                out.constant += sub.c[l].squaredNorm();
            }
            out.lifted.matrix /= count;
            out.constant /= count;
        }
        else
        {
            CMatrix B = CMatrix::Zero(sub.B.front().rows(), sub.B.front().cols());
            CVector c = CVector::Zero(sub.c.front().size());
            for (std::size_t l = 0; l < sub.B.size(); ++l)
            {
                B += sub.B[l];
                c += sub.c[l];
            }
            B /= count;
            c /= count;
            out.lifted = lift(B, c);
            out.constant = c.squaredNorm();
        }
        return out;
    }

    DesignResult design_codeword(const ChannelModel &model, const SectorSpec &sector, const AOConfig &ao,
                                 std::mt19937_64 &rng)
    {
        ao.validate();
        sector.validate();
        const auto counts = model.geometry().element_counts();
        const SectorSamples samples = sector_samples(model, sector, ao.samples);

        DesignResult res;
        double best = -1.0;
        for (int g = 0; g < ao.inits; ++g)
        {
            auto candidate = ReflectionPattern::random(counts, rng);
            const double v = smaecp(model, samples, candidate);
            if (v > best)
            {
                best = v;
                res.pattern = std::move(candidate);
            }
        }
        res.trace.push_back(best);
        double objective = best;

        for (int sweep = 1; sweep <= ao.max_iterations; ++sweep)
        {
            const double previous = objective;
            for (int j = 0; j < irs_count; ++j)
            {
                if (counts[j] == 0)
                    continue;
                const auto agg = aggregate(assemble_subproblem(model, samples, res.pattern, j), ao.aggregation);
                SdpSolution sol;
                try
                {
                    sol = solve_relaxation(agg.lifted, ao.sdp);
                }
                catch (const SolverError &e)
                {
                    throw SolverError("sector " + std::to_string(sector.index) + "/" + std::to_string(sector.count) +
                                          ", IRS " + std::to_string(j + 1) + ": " + e.what(),
                                      e.last_iterate(), e.gap());
                }
                const auto rnd = randomize(sol, agg.lifted, ao.randomizations, rng);

                ReflectionPattern candidate = res.pattern;
                candidate.set_irs(j, rnd.phases);
                const double value = smaecp(model, samples, candidate);

                SubproblemRecord rec;
                rec.sweep = sweep;
                rec.irs = j;
                rec.relaxed_value = sol.value;
                rec.upper_bound = sol.upper_bound;
                rec.relative_gap = sol.relative_gap;
                rec.randomized_value = rnd.value;
                rec.rank_one = rnd.rank_one;
                rec.accepted = !ao.guarded || value >= objective;
                if (rec.accepted)
                {
                    res.pattern = std::move(candidate);
                    objective = value;
                }
                res.subproblems.push_back(rec);
            }
            res.trace.push_back(objective);
            res.sweeps = sweep;
            if (objective - previous < ao.epsilon * std::abs(previous))
                break;
        }
        return res;
    }

    std::uint64_t codebook_seed(std::uint64_t base, int sectors)
    {
        return derive_seed(base, static_cast<std::uint64_t>(sectors));
    }

    Codebook build_single_user_codebook(const ChannelModel &model, int sectors, const AOConfig &ao, std::uint64_t seed,
                                        int threads)
    {
        if (sectors < 1)
            throw ConfigError("sector count D must be >= 1");
        Codebook cb;
        cb.kind = CodebookKind::SingleUser;
        cb.aggregation = ao.aggregation;
        cb.geometry_hash = model.geometry().hash();
        cb.seed = seed;
        cb.entries.resize(static_cast<std::size_t>(sectors));
        parallel_for(cb.entries.size(), threads, [&](std::size_t i) {
            const int d = static_cast<int>(i) + 1;
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(d));
            auto res = design_codeword(model, SectorSpec{sectors, d}, ao, rng);
            auto &e = cb.entries[i];
            e.pattern = std::move(res.pattern);
            e.sectors = sectors;
            e.sector = d;
            e.objective = res.objective();
            e.seed = seed + static_cast<std::uint64_t>(d);
            e.sweeps = res.sweeps;
        });
        return cb;
    }

    Codebook union_codebook(const std::vector<Codebook> &parts)
    {
        if (parts.empty())
            throw ConfigError("codebook union needs at least one part");
        std::set<int> seen;
        Codebook out;
        out.kind = CodebookKind::MultiUser;
        out.aggregation = parts.front().aggregation;
        out.geometry_hash = parts.front().geometry_hash;
        out.seed = parts.front().seed;
        for (const auto &p : parts)
        {
            if (p.geometry_hash != out.geometry_hash)
                throw HashMismatchError("codebook union mixes geometries");
            if (p.entries.empty())
                continue;
            const int d = p.entries.front().sectors;
            if (!seen.insert(d).second)
                throw ConfigError("sector count D = " + std::to_string(d) + " appears twice in the union");
            out.entries.insert(out.entries.end(), p.entries.begin(), p.entries.end());
        }
        return out;
    }

    Codebook build_multi_user_codebook(const ChannelModel &model, const std::vector<int> &sector_counts,
                                       const AOConfig &ao, std::uint64_t seed, int threads)
    {
        if (sector_counts.empty())
            throw ConfigError("multi-user codebook needs a non-empty D list");
        std::set<int> unique(sector_counts.begin(), sector_counts.end());
        if (unique.size() != sector_counts.size())
            throw ConfigError("duplicate D in multi-user D list");
        std::vector<Codebook> parts;
        for (int d : sector_counts)
            parts.push_back(build_single_user_codebook(model, d, ao, codebook_seed(seed, d), threads));
        auto out = union_codebook(parts);
        out.seed = seed;
        return out;
    }
}
