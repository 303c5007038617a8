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


#include "irsap/geometry.hpp"
#include "irsap/hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irsap
{
    namespace
    {
        // Ratios such as 0.25 / 0.025 land a few ulps below the integer they represent
        int floor_count(double ratio)
        {
            return static_cast<int>(std::floor(ratio + 1e-9));
        }

        void require_positive(double v, const char *field)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string("radome.") + field + " must be a positive finite length");
        }
    }

    void RadomeConfig::validate() const
    {
        require_positive(wavelength, "lambda");
        require_positive(length, "d_l");
        require_positive(width, "d_w");
        require_positive(thickness, "d_t");
        require_positive(antenna_spacing, "d_A");
        require_positive(element_spacing, "d_I");
        require_positive(mount_height, "H_AR");
        if (antennas_x < 1)
            throw ConfigError("radome.M_x must be >= 1");
        if (antennas_y < 1)
            throw ConfigError("radome.M_y must be >= 1");
        if (!(max_elevation >= 0.0 && max_elevation <= pi / 2.0))
            throw ConfigError("radome.theta_max must lie in [0, pi/2]");
        if (!(boresight_gain > 0.0) || !std::isfinite(boresight_gain))
            throw ConfigError("radome.G_A must be a positive linear gain");
        if (reflect_gain && (!(*reflect_gain > 0.0) || !std::isfinite(*reflect_gain)))
            throw ConfigError("radome.G_I must be a positive linear gain");
    }

    std::array<DeploymentLimit, irs_count> max_deployable_elements(const RadomeConfig &cfg)
    {
        cfg.validate();
        double vertical = cfg.thickness / cfg.element_spacing;
        double t = std::tan(cfg.max_elevation);
        if (t > 0.0)
        {
            vertical = std::min(vertical, cfg.length / (cfg.element_spacing * t));
            vertical = std::min(vertical, cfg.width / (cfg.element_spacing * t));
        }
        const int n2 = floor_count(vertical);
        const int across_width = floor_count(cfg.width / cfg.element_spacing);
        const int across_length = floor_count(cfg.length / cfg.element_spacing);
        return {DeploymentLimit{across_width, n2}, DeploymentLimit{across_width, n2},
                DeploymentLimit{across_length, n2}, DeploymentLimit{across_length, n2}};
    }

    std::array<int, irs_count> RadomeGeometry::element_counts() const
    {
        std::array<int, irs_count> out{};
        for (int j = 0; j < irs_count; ++j)
            out[j] = irs_[j].count();
        return out;
    }

    std::uint64_t RadomeGeometry::hash() const
    {
        Fnv1a h;
        h.add(std::string_view("irsap-geometry-v1"));
        h.add(cfg_.wavelength).add(cfg_.length).add(cfg_.width).add(cfg_.thickness);
        h.add(cfg_.antennas_x).add(cfg_.antennas_y).add(cfg_.antenna_spacing).add(cfg_.element_spacing);
        h.add(cfg_.max_elevation).add(cfg_.mount_height).add(cfg_.boresight_gain).add(cfg_.element_gain());
        for (const auto &l : irs_)
            h.add(l.horizontal).add(l.vertical);
        return h.value();
    }

    RadomeGeometry build_geometry(const RadomeConfig &cfg, const std::array<int, irs_count> &elements)
    {
        const auto limits = max_deployable_elements(cfg);

        RadomeGeometry g;
        g.cfg_ = cfg;

        for (int mx = 0; mx < cfg.antennas_x; ++mx)
            for (int my = 0; my < cfg.antennas_y; ++my)
                g.antennas_.emplace_back((mx - (cfg.antennas_x - 1) / 2.0) * cfg.antenna_spacing,
                                         (my - (cfg.antennas_y - 1) / 2.0) * cfg.antenna_spacing, 0.0);

        const std::array<Vec3, irs_count> normals = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0), Vec3(0, -1, 0)};
        const double dI = cfg.element_spacing;

        for (int j = 0; j < irs_count; ++j)
        {
            const int n = elements[j];
            const auto &lim = limits[j];
            const std::string tag = "IRS " + std::to_string(j + 1) + ": ";
            if (n < 0)
                throw ConfigError(tag + "negative element count");
            if (n > lim.total())
                throw ConfigError(tag + std::to_string(n) + " elements exceed the deployable maximum " +
                                  std::to_string(lim.horizontal) + " x " + std::to_string(lim.vertical));
            if (n > 0 && n % lim.vertical != 0)
                throw ConfigError(tag + "element count must be a multiple of N_{j,2,max} = " + std::to_string(lim.vertical));

            IrsLayout &layout = g.irs_[j];
            layout.normal = normals[j];
            layout.vertical = n > 0 ? lim.vertical : 0;
            layout.horizontal = n > 0 ? n / lim.vertical : 0;
            layout.offset = static_cast<int>(g.elements_.size());

            for (int h = 0; h < layout.horizontal; ++h)
            {
                const double along = (h - (layout.horizontal - 1) / 2.0) * dI;
                for (int v = 0; v < layout.vertical; ++v)
                {
                    const double z = -dI / 2.0 - v * dI;
                    Vec3 p;
                    switch (j)
                    {
                    case 0: p = Vec3(-cfg.length / 2.0, along, z); break;
                    case 1: p = Vec3(cfg.length / 2.0, along, z); break;
                    case 2: p = Vec3(along, -cfg.width / 2.0, z); break;
                    default: p = Vec3(along, cfg.width / 2.0, z); break;
                    }
                    g.elements_.push_back(p);
                    g.owner_.push_back(j);
                }
            }
        }
        return g;
    }

    RadomeGeometry build_full_geometry(const RadomeConfig &cfg)
    {
        const auto limits = max_deployable_elements(cfg);
        std::array<int, irs_count> n{};
        for (int j = 0; j < irs_count; ++j)
            n[j] = limits[j].total();
        return build_geometry(cfg, n);
    }
}
