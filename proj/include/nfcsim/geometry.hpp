// SPDX-License-Identifier: Apache-2.0
//
// nfcsim - near-field multiuser channel models, capacity limits, and beamforming
// Copyright (C) 2025-2026 The nfcsim developers
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

#ifndef NFCSIM_GEOMETRY_HPP
#define NFCSIM_GEOMETRY_HPP

#include <armadillo>

namespace nfcsim
{
    enum class Layout
    {
        UPA,       // uniform planar array in the x-z plane, normal +y
        ULA,       // uniform linear array on the x- or z-axis
        UCA,       // uniform circular array in the x-y plane
        CAP_LINEAR, // continuous aperture on the x-axis
        CAP_PLANAR  // continuous aperture in the x-z plane
    };

    // User location in spherical coordinates relative to the array center.
    //   r     : range in m
    //   theta : azimuth in [0, pi]
    //   phi   : elevation in [0, pi]
    // Direction cosines: Phi = sin(phi) cos(theta), Psi = sin(phi) sin(theta),
    // Omega = cos(phi); the Cartesian position is r * [Phi, Psi, Omega].
    struct UserPose
    {
        double r = 0.0;
        double theta = 0.0;
        double phi = 1.5707963267948966; // default: x-y plane

        UserPose() = default;
        UserPose(double r_in, double theta_in, double phi_in);

        double big_phi() const;   // sin(phi) cos(theta)
        double big_psi() const;   // sin(phi) sin(theta)
        double big_omega() const; // cos(phi)
        arma::vec3 cartesian() const;
    };

    // Element positions / aperture description for SPD and CAP arrays.
    // SPD layouts carry element positions (3 x M) and per-element area A;
    // CAP layouts carry only the aperture lengths.
    struct ArrayGeometry
    {
        Layout layout = Layout::ULA;
        arma::uword M_x = 1, M_z = 1; // element counts (SPD grids)
        double d = 0.0;               // element spacing in m
        double A = 0.0;               // per-element area in m^2
        double L_x = 0.0, L_z = 0.0;  // aperture lengths in m
        double radius = 0.0;          // UCA radius in m
        arma::mat positions;          // 3 x M element centers in m
        arma::vec3 normal = {0.0, 1.0, 0.0};

        arma::uword n_elements() const { return positions.n_cols; }
        bool is_grid() const { return layout == Layout::UPA || layout == Layout::ULA; }
        bool is_cap() const { return layout == Layout::CAP_LINEAR || layout == Layout::CAP_PLANAR; }

        // maximum distance between any two elements (SPD) or aperture diagonal (CAP)
        double aperture() const;

        // Constructors. upa() enforces the odd-count convention; uniform_grid()
        // accepts any counts and centers the grid at the origin.
        static ArrayGeometry upa(arma::uword m_x, arma::uword m_z, double d, double A);
        static ArrayGeometry ula(arma::uword m, double d, double A, char axis = 'x');
        static ArrayGeometry uniform_grid(arma::uword m_x, arma::uword m_z, double d, double A);
        static ArrayGeometry uca(arma::uword m, double diameter, double A);
        static ArrayGeometry cap_linear(double length);
        static ArrayGeometry cap_planar(double l_x, double l_z);
    };

    struct FieldBoundaries
    {
        double rayleigh;        // 2 D_a^2 / lambda, array far-field boundary in m
        double fresnel_array;   // 0.5 sqrt(D_a^3 / lambda) in m
        double fresnel_element; // 0.5 sqrt(D^3 / lambda) in m
    };

    FieldBoundaries field_boundaries(double aperture_array, double aperture_element, double lambda);

} // namespace nfcsim

#endif
