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


#include "irsap/oracle.hpp"
#include "irsap/parallel.hpp"

#include <limits>

namespace irsap
{
    namespace
    {
        double rho_amplitude(const RadomeConfig &cfg)
        {
            return std::sqrt(cfg.element_aperture() / (4.0 * pi));
        }

        cplx spherical(const Vec3 &p, const Vec3 &q, const RadomeConfig &cfg)
        {
            const double r = (p - q).norm();
            if (!(r > 0.0))
                throw std::logic_error("coincident points in the spherical-wave coefficient");
            return rho_amplitude(cfg) * std::exp(cplx(0.0, -2.0 * pi * r / cfg.wavelength)) / r;
        }
    }

    CVector TermExpansion::evaluate(const CVector &x) const
    {
        if (static_cast<std::size_t>(x.size()) != single.size())
            throw ConfigError("coefficient count does not match the expansion");
        CVector h = direct;
        for (std::size_t a = 0; a < single.size(); ++a)
            h += single[a] * x[static_cast<Eigen::Index>(a)];
        for (const auto &p : pairs)
            h += p.response * (x[p.first] * x[p.second]);
        return h;
    }

    TermExpansion term_expansion(const Direction &dir, const RadomeGeometry &geom)
    {
        const RadomeConfig &cfg = geom.config();
        const auto &ant = geom.antenna_positions();
        const auto &el = geom.element_positions();
        const int m = static_cast<int>(ant.size());
        const int n = static_cast<int>(el.size());
        const double k = 2.0 * pi / cfg.wavelength;
        const double st = std::sin(dir.elevation);
        const Vec3 u(st * std::cos(dir.azimuth), st * std::sin(dir.azimuth), -std::cos(dir.elevation));
        const double ga = dir.elevation <= pi / 2.0 ? std::sqrt(cfg.boresight_gain) : 0.0;
        const double gi = std::sqrt(cfg.element_gain());

        TermExpansion t;
        // plane wave phase at each antenna relative to antenna 0
        t.direct.resize(m);
        for (int q = 0; q < m; ++q)
            t.direct[q] = ga * std::exp(cplx(0.0, k * u.dot(ant[q] - ant[0])));

        std::vector<cplx> incident(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < n; ++a)
        {
            const Vec3 &normal = geom.irs(geom.irs_of(a)).normal;
            if ((-u).dot(normal) < 0.0)
                incident[a] = std::exp(cplx(0.0, k * u.dot(el[a] - ant[0])));
        }

        for (int a = 0; a < n; ++a)
        {
            CVector f(m);
            for (int q = 0; q < m; ++q)
                f[q] = incident[a] * gi * spherical(el[a], ant[q], cfg) * ga;
            t.single.push_back(f);
        }

        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
            {
                const int ja = geom.irs_of(a);
                const int jb = geom.irs_of(b);
                if (ja == jb)
                    continue;
                const Vec3 &na = geom.irs(ja).normal;
                const Vec3 &nb = geom.irs(jb).normal;
                const bool visible = (el[b] - el[a]).dot(na) > 0.0 && (el[a] - el[b]).dot(nb) > 0.0;
                TermExpansion::Pair p{a, b, CVector::Zero(m)};
                if (visible)
                    for (int q = 0; q < m; ++q)
                        p.response[q] = incident[a] * gi * spherical(el[a], el[b], cfg) * gi * spherical(el[b], ant[q], cfg) * ga;
                t.pairs.push_back(std::move(p));
            }
        return t;
    }

    CVector term_enumeration_earv(const Direction &dir, const ReflectionPattern &pattern, const RadomeGeometry &geom)
    {
        if (pattern.size() != geom.element_count())
            throw ConfigError("reflection pattern does not match the geometry");
        const TermExpansion t = term_expansion(dir, geom);
        CVector x(pattern.size());
        for (int a = 0; a < pattern.size(); ++a)
            x[a] = std::polar(1.0, pattern.phases()[a]);
        return t.evaluate(x);
    }

    namespace
    {
        std::uint64_t checked_space(int levels, int elements, std::uint64_t cap)
        {
            if (levels < 2)
                throw ConfigError("quantization needs Q >= 2 phase levels");
            std::uint64_t space = 1;
            for (int i = 0; i < elements; ++i)
            {
                if (space > cap / static_cast<std::uint64_t>(levels))
                    throw ConfigError("exhaustive search over " + std::to_string(levels) + "^" + std::to_string(elements) +
                                      " assignments exceeds the cap of " + std::to_string(cap));
                space *= static_cast<std::uint64_t>(levels);
            }
            return space;
        }

        QuantizedOptimum finish(std::vector<int> levels, int q, double value, std::uint64_t evaluated)
        {
            QuantizedOptimum out;
            out.phases.resize(static_cast<Eigen::Index>(levels.size()));
            for (std::size_t i = 0; i < levels.size(); ++i)
                out.phases[static_cast<Eigen::Index>(i)] = 2.0 * pi * levels[i] / q;
            out.levels = std::move(levels);
            out.value = value;
            out.evaluated = evaluated;
            return out;
        }
    }

    QuantizedOptimum exhaustive_quantized_optimum(const QuadraticSamples &objective, const QuantizedSearchSpec &spec,
                                                  int threads)
    {
        if (objective.samples.empty())
            throw ConfigError("objective has no samples");
        const int n = static_cast<int>(objective.samples.front().single.size());
        const int q = spec.levels;
        const std::uint64_t space = checked_space(q, n, spec.cap);
        std::vector<cplx> grid(static_cast<std::size_t>(q));
        for (int k = 0; k < q; ++k)
            grid[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * pi * k / q);

        if (n == 0)
        {
            double v = 0.0;
            for (const auto &s : objective.samples)
                v += s.direct.squaredNorm();
            return finish({}, q, v * objective.scale, 1);
        }

        // The objective is |u_l + v_l x_last|^2 summed over samples once the other elements are fixed,
        // so the last element is scanned in closed form. Chunks split on the first element and each
        // scans in lexicographic order.
        const int last = n - 1;
        const std::uint64_t outer = space / static_cast<std::uint64_t>(q);
        const std::size_t chunks = n > 1 ? static_cast<std::size_t>(q) : 1;
        const std::uint64_t chunk = outer / chunks;
        std::vector<double> best(chunks, -std::numeric_limits<double>::infinity());
        std::vector<std::uint64_t> arg(chunks, 0);
        parallel_for(chunks, threads, [&](std::size_t c) {
            CVector x(n);
            for (std::uint64_t i = 0; i < chunk; ++i)
            {
                std::uint64_t code = c * chunk + i;
                for (int e = last - 1; e >= 0; --e)
                {
                    x[e] = grid[code % static_cast<std::uint64_t>(q)];
                    code /= static_cast<std::uint64_t>(q);
                }
                double norms = 0.0;
                cplx cross = 0.0;
                for (const auto &s : objective.samples)
                {
                    CVector u = s.direct;
                    CVector v = s.single[static_cast<std::size_t>(last)];
                    for (int a = 0; a < last; ++a)
                        u += s.single[static_cast<std::size_t>(a)] * x[a];
                    for (const auto &p : s.pairs)
                    {
                        if (p.first == last)
                            v += p.response * x[p.second];
                        else if (p.second == last)
                            v += p.response * x[p.first];
                        else
                            u += p.response * (x[p.first] * x[p.second]);
                    }
                    norms += u.squaredNorm() + v.squaredNorm();
                    cross += u.dot(v);
                }
                for (int k = 0; k < q; ++k)
                {
                    const double val = objective.scale * (norms + 2.0 * std::real(cross * grid[static_cast<std::size_t>(k)]));
                    if (val > best[c])
                    {
                        best[c] = val;
                        arg[c] = (c * chunk + i) * static_cast<std::uint64_t>(q) + static_cast<std::uint64_t>(k);
                    }
                }
            }
        });

        std::size_t top = 0;
        for (std::size_t c = 1; c < chunks; ++c)
            if (best[c] > best[top])
                top = c;
        std::vector<int> levels(static_cast<std::size_t>(n));
        std::uint64_t code = arg[top];
        for (int e = n - 1; e >= 0; --e)
        {
            levels[static_cast<std::size_t>(e)] = static_cast<int>(code % static_cast<std::uint64_t>(q));
            code /= static_cast<std::uint64_t>(q);
        }
        return finish(std::move(levels), q, best[top], space);
    }

    QuantizedOptimum exhaustive_quantized_optimum(const RadomeGeometry &geom, const SectorSpec &sector, int samples,
                                                  const QuantizedSearchSpec &spec, int threads)
    {
        const RadomeConfig &cfg = geom.config();
        QuadraticSamples obj;
        for (double phi : sample_azimuths(sector, samples))
            obj.samples.push_back(term_expansion({cfg.max_elevation, phi}, geom));
        const double elev = cfg.max_elevation;
        const double a1 = cfg.wavelength * std::cos(elev) / (4.0 * pi * cfg.mount_height);
        obj.scale = a1 * a1 / samples;
        return exhaustive_quantized_optimum(obj, spec, threads);
    }

    QuantizedOptimum exhaustive_quantized_optimum(const LiftedProblem &problem, const QuantizedSearchSpec &spec)
    {
        const int n = problem.dim();
        const int q = spec.levels;
        const std::uint64_t space = checked_space(q, n, spec.cap);
        CVector t = CVector::Ones(n + 1);
        std::vector<int> k(static_cast<std::size_t>(n), 0);
        double best = -std::numeric_limits<double>::infinity();
        std::vector<int> arg = k;
        for (std::uint64_t i = 0; i < space; ++i)
        {
            for (int e = 0; e < n; ++e)
                t[e] = std::polar(1.0, 2.0 * pi * k[static_cast<std::size_t>(e)] / q);
            const double v = std::real(t.dot(problem.matrix * t));
            if (v > best)
            {
                best = v;
                arg = k;
            }
            // odometer, last element fastest
            for (int e = n - 1; e >= 0; --e)
            {
                if (++k[static_cast<std::size_t>(e)] < q)
                    break;
                k[static_cast<std::size_t>(e)] = 0;
            }
        }
        return finish(std::move(arg), q, best, space);
    }
}
