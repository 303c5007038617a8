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


#include "irsap/channel.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace irsap
{
    namespace
    {
        Vec3 source_direction(const Direction &dir)
        {
            const double st = std::sin(dir.elevation);
            return {st * std::cos(dir.azimuth), st * std::sin(dir.azimuth), -std::cos(dir.elevation)};
        }

        cplx spherical_coefficient(const Vec3 &p, const Vec3 &q, double wavelength, double aperture)
        {
            const double d = (p - q).norm();
            assert(d > 0.0);
            const double k = 2.0 * pi / wavelength;
            return std::sqrt(aperture / (4.0 * pi)) * std::polar(1.0 / d, -k * d);
        }

        int total(const std::array<int, irs_count> &counts)
        {
            int n = 0;
            for (int c : counts)
                n += c;
            return n;
        }
    }

    double wrap_phase(double phase)
    {
        double w = std::remainder(phase, 2.0 * pi);
        return w <= -pi ? w + 2.0 * pi : w;
    }

    CVector steering_vector(double angle, int size)
    {
        CVector e(size);
        for (int k = 0; k < size; ++k)
            e[k] = std::polar(1.0, pi * angle * k);
        return e;
    }

    CVector direct_arv(const Direction &dir, const RadomeConfig &cfg)
    {
        const double gain = dir.elevation <= pi / 2.0 ? cfg.boresight_gain : 0.0;
        const double scale = 2.0 * cfg.antenna_spacing / cfg.wavelength * std::sin(dir.elevation);
        const CVector ex = steering_vector(scale * std::cos(dir.azimuth), cfg.antennas_x);
        const CVector ey = steering_vector(scale * std::sin(dir.azimuth), cfg.antennas_y);
        CVector h(cfg.antenna_count());
        for (int mx = 0; mx < cfg.antennas_x; ++mx)
            for (int my = 0; my < cfg.antennas_y; ++my)
                h[mx * cfg.antennas_y + my] = ex[mx] * ey[my];
        return std::sqrt(gain) * h;
    }

    cplx los_coefficient(double elevation, const RadomeConfig &cfg)
    {
        if (!(elevation >= 0.0 && elevation < pi / 2.0))
            throw ConfigError("LoS coefficient needs an elevation in [0, pi/2)");
        const double distance = cfg.mount_height / std::cos(elevation);
        return std::polar(cfg.wavelength / (4.0 * pi * distance), -2.0 * pi / cfg.wavelength * distance);
    }

    // --- ReflectionPattern --------------------------------------------------------------------------------------

    ReflectionPattern ReflectionPattern::from_phases(const std::array<int, irs_count> &counts, std::span<const double> phases)
    {
        if (static_cast<int>(phases.size()) != total(counts))
            throw ConfigError("reflection pattern has " + std::to_string(phases.size()) + " phases, geometry has " +
                              std::to_string(total(counts)) + " elements");
        ReflectionPattern p;
        p.counts_ = counts;
        p.phases_.resize(static_cast<Eigen::Index>(phases.size()));
        for (std::size_t i = 0; i < phases.size(); ++i)
            p.phases_[static_cast<Eigen::Index>(i)] = wrap_phase(phases[i]);
        p.refresh();
        return p;
    }

    ReflectionPattern ReflectionPattern::unity(const std::array<int, irs_count> &counts)
    {
        std::vector<double> zeros(static_cast<std::size_t>(total(counts)), 0.0);
        return from_phases(counts, zeros);
    }

    ReflectionPattern ReflectionPattern::random(const std::array<int, irs_count> &counts, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
        std::vector<double> ph(static_cast<std::size_t>(total(counts)));
        for (auto &v : ph)
            v = u(rng);
        return from_phases(counts, ph);
    }

    int ReflectionPattern::offset(int j) const
    {
        int off = 0;
        for (int q = 0; q < j; ++q)
            off += counts_[q];
        return off;
    }

    void ReflectionPattern::set_irs(int j, const RVector &phases)
    {
        if (phases.size() != counts_.at(static_cast<std::size_t>(j)))
            throw ConfigError("IRS phase vector size mismatch");
        const int off = offset(j);
        for (Eigen::Index n = 0; n < phases.size(); ++n)
        {
            phases_[off + n] = wrap_phase(phases[n]);
            coeffs_[off + n] = std::polar(1.0, phases_[off + n]);
        }
    }

    void ReflectionPattern::refresh()
    {
        coeffs_.resize(phases_.size());
        for (Eigen::Index i = 0; i < phases_.size(); ++i)
            coeffs_[i] = std::polar(1.0, phases_[i]);
    }

    // --- Kernel and model ---------------------------------------------------------------------------------------

    ReflectionKernel build_kernel(const RadomeGeometry &geom)
    {
        const auto &cfg = geom.config();
        const auto &el = geom.element_positions();
        const auto &ant = geom.antenna_positions();
        const int n = geom.element_count();
        const int m = geom.antenna_count();
        const double aperture = cfg.element_aperture();
        const double root_gain = std::sqrt(cfg.boresight_gain);
        const double root_element_gain = std::sqrt(cfg.element_gain());

        ReflectionKernel k;
        k.to_antenna.resize(n, m);
        k.inter_element = CMatrix::Zero(n, n);
        for (int a = 0; a < n; ++a)
            for (int q = 0; q < m; ++q)
                k.to_antenna(a, q) = root_element_gain * root_gain * spherical_coefficient(el[a], ant[q], cfg.wavelength, aperture);

        for (int a = 0; a < n; ++a)
        {
            const Vec3 &na = geom.irs(geom.irs_of(a)).normal;
            for (int b = 0; b < n; ++b)
            {
                if (geom.irs_of(a) == geom.irs_of(b))
                    continue;
                const Vec3 &nb = geom.irs(geom.irs_of(b)).normal;
                const bool visible = (el[b] - el[a]).dot(na) > 0.0 && (el[a] - el[b]).dot(nb) > 0.0;
                if (visible)
                    k.inter_element(a, b) = root_element_gain * spherical_coefficient(el[a], el[b], cfg.wavelength, aperture);
            }
        }
        return k;
    }

    DirectionResponse &DirectionResponse::operator+=(const DirectionResponse &o)
    {
        direct += o.direct;
        incidence += o.incidence;
        return *this;
    }

    DirectionResponse DirectionResponse::operator*(cplx s) const
    {
        return {direct * s, incidence * s};
    }

    ChannelModel::ChannelModel(RadomeGeometry geom)
        : geom_(std::move(geom)), kernel_(std::make_shared<const ReflectionKernel>(build_kernel(geom_)))
    {
    }

    bool ChannelModel::illuminated(const Direction &dir, int element) const
    {
        // The wave travels along -u; grazing incidence counts as dark
        const Vec3 travel = -source_direction(dir);
        return travel.dot(geom_.irs(geom_.irs_of(element)).normal) < 0.0;
    }

    DirectionResponse ChannelModel::response(const Direction &dir) const
    {
        const auto &cfg = config();
        const Vec3 u = source_direction(dir);
        const Vec3 &ref = geom_.antenna_positions().front();
        const double k = 2.0 * pi / cfg.wavelength;

        DirectionResponse r;
        r.direct = direct_arv(dir, cfg);
        r.incidence = CVector::Zero(element_count());
        const auto &el = geom_.element_positions();
        for (int a = 0; a < element_count(); ++a)
            if (illuminated(dir, a))
                r.incidence[a] = std::polar(1.0, k * u.dot(el[a] - ref));
        return r;
    }

    CVector ChannelModel::earv(const DirectionResponse &resp, const ReflectionPattern &pattern) const
    {
        if (pattern.size() != element_count() || resp.incidence.size() != element_count())
            throw ConfigError("reflection pattern does not match the geometry");
        if (element_count() == 0)
            return resp.direct;
        const CVector &theta = pattern.coefficients();
        const CVector x = resp.incidence.cwiseProduct(theta);
        const CVector y = kernel_->inter_element.transpose() * x;
        return resp.direct + kernel_->to_antenna.transpose() * (x + theta.cwiseProduct(y));
    }

    ReflectionArvs ChannelModel::reflection_arvs(const Direction &dir) const
    {
        const DirectionResponse r = response(dir);
        const int n = element_count();
        const CMatrix rt = kernel_->to_antenna.transpose();
        ReflectionArvs out;
        out.single = rt * r.incidence.asDiagonal();
        out.double_reflect.reserve(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a)
        {
            const CVector col = r.incidence[a] * kernel_->inter_element.row(a).transpose();
            out.double_reflect.push_back(rt * col.asDiagonal());
        }
        return out;
    }

    ChannelModel ChannelModel::without_irs() const
    {
        return ChannelModel(build_geometry(config(), {0, 0, 0, 0}));
    }

    // --- ArrayResponseSet ---------------------------------------------------------------------------------------

    ArrayResponseSet::ArrayResponseSet(const ChannelModel &model, std::vector<Direction> grid)
        : hash_(model.geometry().hash()), kernel_(model.shared_kernel()), grid_(std::move(grid))
    {
        responses_.reserve(grid_.size());
        for (const auto &d : grid_)
            responses_.push_back(model.response(d));
    }

    CVector ArrayResponseSet::single(std::size_t i, int a) const
    {
        return responses_[i].incidence[a] * kernel_->to_antenna.row(a).transpose();
    }

    CVector ArrayResponseSet::double_reflect(std::size_t i, int a, int b) const
    {
        return responses_[i].incidence[a] * kernel_->inter_element(a, b) * kernel_->to_antenna.row(b).transpose();
    }

    namespace
    {
        constexpr char response_magic[8] = {'I', 'R', 'S', 'A', 'P', 'A', 'R', 'S'};
        constexpr std::uint32_t response_version = 1;

        template <typename T>
        void put(std::ofstream &f, const T &v) { f.write(reinterpret_cast<const char *>(&v), sizeof v); }

        template <typename T>
        T get(std::ifstream &f)
        {
            T v{};
            f.read(reinterpret_cast<char *>(&v), sizeof v);
            if (!f)
                throw std::runtime_error("truncated array response cache");
            return v;
        }

        void put_vector(std::ofstream &f, const CVector &v)
        {
            f.write(reinterpret_cast<const char *>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(cplx)));
        }

        CVector get_vector(std::ifstream &f, int n)
        {
            CVector v(n);
            f.read(reinterpret_cast<char *>(v.data()), static_cast<std::streamsize>(n * sizeof(cplx)));
            if (!f)
                throw std::runtime_error("truncated array response cache");
            return v;
        }
    }

    void ArrayResponseSet::save(const std::filesystem::path &file) const
    {
        std::ofstream f(file, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + file.string());
        f.write(response_magic, sizeof response_magic);
        put(f, response_version);
        put(f, hash_);
        put(f, static_cast<std::uint64_t>(grid_.size()));
        for (std::size_t i = 0; i < grid_.size(); ++i)
        {
            put(f, grid_[i].elevation);
            put(f, grid_[i].azimuth);
            put_vector(f, responses_[i].direct);
            put_vector(f, responses_[i].incidence);
        }
    }

    ArrayResponseSet ArrayResponseSet::load(const std::filesystem::path &file, const ChannelModel &model)
    {
        std::ifstream f(file, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot read " + file.string());
        char magic[8];
        f.read(magic, sizeof magic);
        if (!f || std::memcmp(magic, response_magic, sizeof magic) != 0)
            throw std::runtime_error(file.string() + " is not an array response cache");
        if (get<std::uint32_t>(f) != response_version)
            throw std::runtime_error(file.string() + ": unsupported cache version");
        const auto hash = get<std::uint64_t>(f);
        if (hash != model.geometry().hash())
            throw HashMismatchError(file.string() + ": cached responses belong to a different radome configuration");

        ArrayResponseSet s;
        s.hash_ = hash;
        s.kernel_ = model.shared_kernel();
        const auto count = get<std::uint64_t>(f);
        for (std::uint64_t i = 0; i < count; ++i)
        {
            Direction d;
            d.elevation = get<double>(f);
            d.azimuth = get<double>(f);
            s.grid_.push_back(d);
            DirectionResponse r;
            r.direct = get_vector(f, model.antenna_count());
            r.incidence = get_vector(f, model.element_count());
            s.responses_.push_back(std::move(r));
        }
        return s;
    }

    // --- Rician channels ----------------------------------------------------------------------------------------

    ChannelRealization draw_rician_realization(const Direction &user, double kappa, int paths, const RadomeConfig &cfg,
                                               std::mt19937_64 &rng)
    {
        if (!(kappa > 0.0))
            throw ConfigError("Rician factor must be positive");
        if (paths < 1 || (std::isfinite(kappa) && paths < 2))
            throw ConfigError("a finite Rician factor needs at least two paths");

        ChannelRealization r;
        r.kappa = kappa;
        const cplx a1 = los_coefficient(user.elevation, cfg);
        r.gains.push_back(a1);
        r.directions.push_back(user);

        std::uniform_real_distribution<double> elev(0.0, cfg.max_elevation);
        std::uniform_real_distribution<double> azim(0.0, 2.0 * pi);
        const double scale = paths > 1 ? std::abs(a1) / std::sqrt(kappa * (paths - 1)) : 0.0;
        for (int p = 1; p < paths; ++p)
        {
            Direction d;
            d.elevation = elev(rng);
            d.azimuth = azim(rng);
            const cplx z = complex_gaussian(rng);
            if (std::isfinite(kappa))
            {
                r.gains.push_back(scale * z);
                r.directions.push_back(d);
            }
        }
        return r;
    }

    ChannelRealization with_rician_factor(const ChannelRealization &r, double kappa)
    {
        if (!(kappa > 0.0) || !std::isfinite(kappa) || !std::isfinite(r.kappa))
            throw ConfigError("rescaling needs finite positive Rician factors");
        ChannelRealization out = r;
        out.kappa = kappa;
        const double s = std::sqrt(r.kappa / kappa);
        for (std::size_t p = 1; p < out.gains.size(); ++p)
            out.gains[p] *= s;
        return out;
    }

    DirectionResponse combined_response(const ChannelModel &model, const ChannelRealization &r)
    {
        DirectionResponse sum{CVector::Zero(model.antenna_count()), CVector::Zero(model.element_count())};
        for (std::size_t p = 0; p < r.gains.size(); ++p)
            sum += model.response(r.directions[p]) * r.gains[p];
        return sum;
    }

    CVector draw_rician_channel(const Direction &user, double kappa, int paths, const ReflectionPattern &pattern,
                                const ChannelModel &model, std::mt19937_64 &rng)
    {
        const auto r = draw_rician_realization(user, kappa, paths, model.config(), rng);
        return model.earv(combined_response(model, r), pattern);
    }
}
