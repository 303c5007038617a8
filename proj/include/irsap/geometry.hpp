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


#ifndef IRSAP_GEOMETRY_HPP
#define IRSAP_GEOMETRY_HPP

#include "irsap/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace irsap
{
    // Physical parameters of the antenna radome. Lengths are in meters, angles in radians.
    // Defaults are the reference deployment: 6 GHz carrier, 5-lambda square radome mounted 5 m above ground,
    // 2x2 half-wavelength antenna array, half-wavelength IRS elements and 80 degree coverage.
    struct RadomeConfig
    {
        double wavelength = 0.05;               // lambda
        double length = 0.25;                   // d_l, extent along x
        double width = 0.25;                    // d_w, extent along y
        double thickness = 0.025;               // d_t, extent along -z
        int antennas_x = 2;                     // M_x
        int antennas_y = 2;                     // M_y
        double antenna_spacing = 0.025;         // d_A
        double element_spacing = 0.025;         // d_I, equal to the element aperture side
        double max_elevation = 4.0 * pi / 9.0;  // theta_max
        double mount_height = 5.0;              // H_AR
        double boresight_gain = 2.0;            // G_A, linear (half-isotropic pattern)
        std::optional<double> reflect_gain;     // G_I, receive gain of one element; unset means 4 pi A / lambda^2

        int antenna_count() const { return antennas_x * antennas_y; }
        double element_aperture() const { return element_spacing * element_spacing; }
        double element_gain() const
        {
            return reflect_gain ? *reflect_gain : 4.0 * pi * element_aperture() / (wavelength * wavelength);
        }

        // Throws ConfigError naming the offending field
        void validate() const;
    };

    // Deployment limits of one IRS: elements along the horizontal face axis and along z
    struct DeploymentLimit
    {
        int horizontal = 0; // N_{j,1,max}
        int vertical = 0;   // N_{j,2,max}
        int total() const { return horizontal * vertical; }
    };

    std::array<DeploymentLimit, irs_count> max_deployable_elements(const RadomeConfig &cfg);

    struct IrsLayout
    {
        Vec3 normal = Vec3::Zero();    // inward unit normal, facing the antenna array
        int horizontal = 0;            // N_{j,1}
        int vertical = 0;              // N_{j,2}
        int offset = 0;                // index of the first element in the flattened element list
        int count() const { return horizontal * vertical; }
    };

    // Antenna and reflecting-element placement. Immutable once built.
    //
    // Antenna m = m_x * M_y + m_y (Kronecker order of the steering vectors).
    // Element n of IRS j = n_1 * N_{j,2} + n_2 (horizontal index major, vertical index minor),
    // stored in a single flattened list with IRS j occupying [offset, offset + count).
    class RadomeGeometry
    {
    public:
        RadomeGeometry() = default;

        const RadomeConfig &config() const { return cfg_; }
        const std::vector<Vec3> &antenna_positions() const { return antennas_; }
        const std::vector<Vec3> &element_positions() const { return elements_; }
        const std::array<IrsLayout, irs_count> &irs() const { return irs_; }
        const IrsLayout &irs(int j) const { return irs_.at(static_cast<std::size_t>(j)); }

        int antenna_count() const { return static_cast<int>(antennas_.size()); }
        int element_count() const { return static_cast<int>(elements_.size()); }
        std::array<int, irs_count> element_counts() const;

        // IRS owning flattened element a
        int irs_of(int element) const { return owner_.at(static_cast<std::size_t>(element)); }

        // Stable 64-bit fingerprint of the configuration and element counts
        std::uint64_t hash() const;

        friend RadomeGeometry build_geometry(const RadomeConfig &cfg, const std::array<int, irs_count> &elements);

    private:
        RadomeConfig cfg_;
        std::vector<Vec3> antennas_;
        std::vector<Vec3> elements_;
        std::vector<int> owner_;
        std::array<IrsLayout, irs_count> irs_{};
    };

    // Places M_x x M_y antennas and N_j elements per IRS (IRS order: x=-d_l/2, x=+d_l/2, y=-d_w/2, y=+d_w/2).
    // N_j must be a multiple of N_{j,2,max} and fit the deployment limit; 0 removes the IRS.
    RadomeGeometry build_geometry(const RadomeConfig &cfg, const std::array<int, irs_count> &elements);

    // Fully populated radome (N_j = N_{j,max} for every IRS)
    RadomeGeometry build_full_geometry(const RadomeConfig &cfg);
}

#endif
