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

#include "nfcsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace nfcsim
{
    UserPose::UserPose(double r_in, double theta_in, double phi_in)
        : r(r_in), theta(theta_in), phi(phi_in)
    {
        if (r <= 0.0)
            throw std::invalid_argument("UserPose: range must be positive");
    }

    double UserPose::big_phi() const { return std::sin(phi) * std::cos(theta); }
    double UserPose::big_psi() const { return std::sin(phi) * std::sin(theta); }
    double UserPose::big_omega() const { return std::cos(phi); }

    arma::vec3 UserPose::cartesian() const
    {
        return {r * big_phi(), r * big_psi(), r * big_omega()};
    }

    double ArrayGeometry::aperture() const
    {
        switch (layout)
        {
        case Layout::UCA:
            return 2.0 * radius;
        case Layout::CAP_LINEAR:
            return L_x;
        case Layout::CAP_PLANAR:
            return std::hypot(L_x, L_z);
        default:
            return std::hypot((M_x > 0 ? (M_x - 1) : 0) * d, (M_z > 0 ? (M_z - 1) : 0) * d);
        }
    }

    static void check_spd_args(double d, double A)
    {
        if (d <= 0.0)
            throw std::invalid_argument("ArrayGeometry: spacing must be positive");
        if (A < 0.0 || A > d * d + 1e-15)
            throw std::invalid_argument("ArrayGeometry: element area must satisfy A <= d^2");
    }

    ArrayGeometry ArrayGeometry::uniform_grid(arma::uword m_x, arma::uword m_z, double d, double A)
    {
        check_spd_args(d, A);
        if (m_x < 1 || m_z < 1)
            throw std::invalid_argument("ArrayGeometry: counts must be >= 1");
        ArrayGeometry g;
        g.layout = (m_x == 1 || m_z == 1) ? Layout::ULA : Layout::UPA;
        g.M_x = m_x;
        g.M_z = m_z;
        g.d = d;
        g.A = A;
        g.L_x = m_x * d;
        g.L_z = m_z * d;
        g.positions.set_size(3, m_x * m_z);
        arma::uword idx = 0;
        const double cx = 0.5 * static_cast<double>(m_x - 1);
        const double cz = 0.5 * static_cast<double>(m_z - 1);
        for (arma::uword iz = 0; iz < m_z; iz++)
            for (arma::uword ix = 0; ix < m_x; ix++, idx++)
            {
                g.positions(0, idx) = (static_cast<double>(ix) - cx) * d;
                g.positions(1, idx) = 0.0;
                g.positions(2, idx) = (static_cast<double>(iz) - cz) * d;
            }
        return g;
    }

    ArrayGeometry ArrayGeometry::upa(arma::uword m_x, arma::uword m_z, double d, double A)
    {
        if (m_x % 2 == 0 || m_z % 2 == 0)
            throw std::invalid_argument("ArrayGeometry::upa: element counts must be odd");
        ArrayGeometry g = uniform_grid(m_x, m_z, d, A);
        g.layout = Layout::UPA;
        return g;
    }

    ArrayGeometry ArrayGeometry::ula(arma::uword m, double d, double A, char axis)
    {
        ArrayGeometry g = (axis == 'z') ? uniform_grid(1, m, d, A) : uniform_grid(m, 1, d, A);
        g.layout = Layout::ULA;
        return g;
    }

    ArrayGeometry ArrayGeometry::uca(arma::uword m, double diameter, double A)
    {
        if (m < 2)
            throw std::invalid_argument("ArrayGeometry::uca: need at least two elements");
        if (m % 2 != 0)
            throw std::invalid_argument("ArrayGeometry::uca: element count must be even "
                                        "(antipodal pairs realize the declared aperture)");
        if (diameter <= 0.0)
            throw std::invalid_argument("ArrayGeometry::uca: diameter must be positive");
        ArrayGeometry g;
        g.layout = Layout::UCA;
        g.M_x = m;
        g.M_z = 1;
        g.radius = 0.5 * diameter;
        g.A = A;
        // spacing along the circle (chord between neighbors)
        g.d = 2.0 * g.radius * std::sin(3.141592653589793238462643 / static_cast<double>(m));
        g.positions.set_size(3, m);
        for (arma::uword i = 0; i < m; i++)
        {
            const double ang = 6.283185307179586476925287 * static_cast<double>(i) / static_cast<double>(m);
            g.positions(0, i) = g.radius * std::cos(ang);
            g.positions(1, i) = g.radius * std::sin(ang);
            g.positions(2, i) = 0.0;
        }
        g.normal = {0.0, 0.0, 1.0}; // array plane is x-y
        return g;
    }

    ArrayGeometry ArrayGeometry::cap_linear(double length)
    {
        if (length <= 0.0)
            throw std::invalid_argument("ArrayGeometry::cap_linear: length must be positive");
        ArrayGeometry g;
        g.layout = Layout::CAP_LINEAR;
        g.L_x = length;
        g.L_z = 0.0;
        return g;
    }

    ArrayGeometry ArrayGeometry::cap_planar(double l_x, double l_z)
    {
        if (l_x <= 0.0 || l_z <= 0.0)
            throw std::invalid_argument("ArrayGeometry::cap_planar: lengths must be positive");
        ArrayGeometry g;
        g.layout = Layout::CAP_PLANAR;
        g.L_x = l_x;
        g.L_z = l_z;
        return g;
    }

    FieldBoundaries field_boundaries(double aperture_array, double aperture_element, double lambda)
    {
        if (aperture_array <= 0.0 || aperture_element <= 0.0 || lambda <= 0.0)
            throw std::invalid_argument("field_boundaries: all inputs must be positive");
        FieldBoundaries b;
        b.rayleigh = 2.0 * aperture_array * aperture_array / lambda;
        b.fresnel_array = 0.5 * std::sqrt(aperture_array * aperture_array * aperture_array / lambda);
        b.fresnel_element = 0.5 * std::sqrt(aperture_element * aperture_element * aperture_element / lambda);
        return b;
    }

} // namespace nfcsim
