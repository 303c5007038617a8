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


#ifndef IRSAP_CHANNEL_HPP
#define IRSAP_CHANNEL_HPP

#include "irsap/geometry.hpp"
#include "irsap/random.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace irsap
{
    // Angle of arrival measured from the antenna array: elevation from the downward boresight, azimuth from +x
    struct Direction
    {
        double elevation = 0.0; // theta in [0, theta_max]
        double azimuth = 0.0;   // phi in [0, 2 pi)
    };

    // Wraps a phase into (-pi, pi]
    double wrap_phase(double phase);

    // e(angle, size): entry k = exp(i pi angle k)
    CVector steering_vector(double angle, int size);

    // Direct array response sqrt(G_A) e(2 d_A / lambda sin(theta) cos(phi), M_x) (x) e(2 d_A / lambda sin(theta) sin(phi), M_y)
    CVector direct_arv(const Direction &dir, const RadomeConfig &cfg);

    // Free-space LoS path coefficient from a ground point at the given elevation; rejects theta >= pi/2
    cplx los_coefficient(double elevation, const RadomeConfig &cfg);

    // Unit-modulus reflection coefficients of every element of every IRS.
    // Stores phases; coefficients are exp(i phase) so |coefficient| = 1 by construction.
    class ReflectionPattern
    {
    public:
        ReflectionPattern() = default;

        static ReflectionPattern from_phases(const std::array<int, irs_count> &counts, std::span<const double> phases);
        static ReflectionPattern unity(const std::array<int, irs_count> &counts);
        static ReflectionPattern random(const std::array<int, irs_count> &counts, std::mt19937_64 &rng);

        int size() const { return static_cast<int>(phases_.size()); }
        const std::array<int, irs_count> &counts() const { return counts_; }
        int offset(int j) const;

        const RVector &phases() const { return phases_; }
        const CVector &coefficients() const { return coeffs_; }
        cplx operator[](int element) const { return coeffs_[element]; }

        // Replaces the phases of IRS j
        void set_irs(int j, const RVector &phases);

    private:
        void refresh();

        std::array<int, irs_count> counts_{};
        RVector phases_;
        CVector coeffs_;
    };

    // Direction-independent part of the element-wise reflection model.
    //   to_antenna(a, m)    = sqrt(G_I) sqrt(G_A) rho(p_a, q_m)
    //   inter_element(a, b) = sqrt(G_I) nu(a -> b) rho(p_a, p_b), zero within one IRS
    // with rho(p, q) = sqrt(A / 4 pi) exp(-i 2 pi |p - q| / lambda) / |p - q| (the element's transmit gain is
    // inside rho) and G_I the element's receive gain, applied once per element hop.
    struct ReflectionKernel
    {
        CMatrix to_antenna;    // N x M
        CMatrix inter_element; // N x N
    };

    ReflectionKernel build_kernel(const RadomeGeometry &geom);

    // Direction-dependent part of the array response: the direct vector h_d and the per-element plane-wave
    // incidence factor chi_j exp(i 2 pi / lambda u . (p_a - q_0)). Both are linear in the incoming field, so the
    // response of a multipath channel is the gain-weighted sum of its path responses.
    struct DirectionResponse
    {
        CVector direct;
        CVector incidence;

        DirectionResponse &operator+=(const DirectionResponse &o);
        DirectionResponse operator*(cplx s) const;
    };

    // Explicit f and g vectors for one direction
    struct ReflectionArvs
    {
        CMatrix single;                      // M x N, column a = f for element a
        std::vector<CMatrix> double_reflect; // [a] is M x N, column b = g for element a then element b
    };

    // Geometry plus its precomputed kernel; the entry point for all array-response evaluation
    class ChannelModel
    {
    public:
        explicit ChannelModel(RadomeGeometry geom);

        const RadomeGeometry &geometry() const { return geom_; }
        const RadomeConfig &config() const { return geom_.config(); }
        const ReflectionKernel &kernel() const { return *kernel_; }
        std::shared_ptr<const ReflectionKernel> shared_kernel() const { return kernel_; }
        int antenna_count() const { return geom_.antenna_count(); }
        int element_count() const { return geom_.element_count(); }

        // Unit vector from the array toward the source and the first-hop illumination of element a
        bool illuminated(const Direction &dir, int element) const;

        DirectionResponse response(const Direction &dir) const;

        // h = h_d + sum f theta + sum g theta theta
        CVector earv(const DirectionResponse &resp, const ReflectionPattern &pattern) const;
        CVector earv(const Direction &dir, const ReflectionPattern &pattern) const { return earv(response(dir), pattern); }

        ReflectionArvs reflection_arvs(const Direction &dir) const;

        // Same radome with every IRS removed (direct path only)
        ChannelModel without_irs() const;

    private:
        RadomeGeometry geom_;
        std::shared_ptr<const ReflectionKernel> kernel_;
    };

    // Precomputed responses over a direction grid, shared read-only across patterns
    class ArrayResponseSet
    {
    public:
        ArrayResponseSet() = default;
        ArrayResponseSet(const ChannelModel &model, std::vector<Direction> grid);

        std::size_t size() const { return grid_.size(); }
        const std::vector<Direction> &grid() const { return grid_; }
        const DirectionResponse &operator[](std::size_t i) const { return responses_[i]; }
        std::uint64_t geometry_hash() const { return hash_; }

        CVector direct(std::size_t i) const { return responses_[i].direct; }
        CVector single(std::size_t i, int a) const;
        CVector double_reflect(std::size_t i, int a, int b) const;

        // Versioned binary container keyed by the geometry hash
        void save(const std::filesystem::path &file) const;
        static ArrayResponseSet load(const std::filesystem::path &file, const ChannelModel &model);

    private:
        std::uint64_t hash_ = 0;
        std::shared_ptr<const ReflectionKernel> kernel_;
        std::vector<Direction> grid_;
        std::vector<DirectionResponse> responses_;
    };

    // Multipath parameters of one user: path 1 is LoS, the rest NLoS
    struct ChannelRealization
    {
        std::vector<cplx> gains;
        std::vector<Direction> directions;
        double kappa = 0.0; // linear Rician factor, +inf for LoS only
    };

    // Draws Psi - 1 NLoS paths with a_psi = |a_1| / sqrt(kappa (Psi - 1)) CN(0, 1), elevations uniform on
    // [0, theta_max] and azimuths uniform on [0, 2 pi). The random stream consumed does not depend on kappa;
    // kappa = +inf keeps only the LoS path.
    ChannelRealization draw_rician_realization(const Direction &user, double kappa, int paths, const RadomeConfig &cfg,
                                               std::mt19937_64 &rng);

    // Rescales the NLoS gains of a realization drawn with another Rician factor
    ChannelRealization with_rician_factor(const ChannelRealization &r, double kappa);

    DirectionResponse combined_response(const ChannelModel &model, const ChannelRealization &r);

    // Effective channel sum_psi a_psi h(theta_psi, phi_psi, Theta)
    CVector draw_rician_channel(const Direction &user, double kappa, int paths, const ReflectionPattern &pattern,
                                const ChannelModel &model, std::mt19937_64 &rng);
}

#endif
