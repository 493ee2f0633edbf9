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

#include "nfcsim/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "nfcsim/quadrature.hpp"
#include "nfcsim/rng.hpp"
#include "nfcsim/special.hpp"

namespace nfcsim
{
    static constexpr double PI = 3.141592653589793238462643;
    static constexpr double TWO_PI = 6.283185307179586476925287;
    static constexpr double FOUR_PI = 12.566370614359172953850574;

    ChannelVector spd_channel(const ArrayGeometry &geom, const UserPose &user,
                              double lambda, ChannelModel model)
    {
        if (geom.is_cap())
            throw std::invalid_argument("spd_channel: CAP apertures use cap_green/cap_gain");
        if (lambda <= 0.0)
            throw std::invalid_argument("spd_channel: wavelength must be positive");
        if (geom.layout == Layout::UCA && model != ChannelModel::NOPROJ)
            throw std::invalid_argument("spd_channel: UCA supports the NOPROJ model only");

        const arma::vec3 rv = user.cartesian();
        const double r = user.r;
        const double Phi = user.big_phi(), Psi = user.big_psi(), Omega = user.big_omega();
        const arma::uword M = geom.n_elements();
        const double k0 = TWO_PI / lambda;

        ChannelVector out;
        out.model = model;
        out.lambda = lambda;
        out.entries.set_size(M);

        const double uniform_amp = std::sqrt(Psi * geom.A / FOUR_PI) / r;

        for (arma::uword m = 0; m < M; m++)
        {
            const arma::vec3 s = geom.positions.col(m);
            const double dist = arma::norm(rv - s);

            switch (model)
            {
            case ChannelModel::EXACT:
            {
                if (dist < kSingularDistance)
                    throw std::domain_error("spd_channel: user coincides with an element");
                const double g = r * Psi * geom.A / (FOUR_PI * dist * dist * dist);
                out.entries[m] = std::sqrt(g) * std::exp(cx_double(0.0, -k0 * dist));
                break;
            }
            case ChannelModel::UPD:
                out.entries[m] = uniform_amp * std::exp(cx_double(0.0, -k0 * dist));
                break;
            case ChannelModel::FRESNEL:
            {
                if (geom.layout == Layout::UCA)
                    throw std::invalid_argument("spd_channel: FRESNEL needs an x-z grid");
                const double x = s[0], z = s[2];
                const double phase = k0 * (r - (x * Phi + z * Omega) +
                                           (x * x * (1.0 - Phi * Phi) + z * z * (1.0 - Omega * Omega)) /
                                               (2.0 * r));
                out.entries[m] = uniform_amp * std::exp(cx_double(0.0, -phase));
                break;
            }
            case ChannelModel::FAR:
            {
                const double phase = k0 * (r - arma::dot(rv / r, s));
                out.entries[m] = uniform_amp * std::exp(cx_double(0.0, -phase));
                break;
            }
            case ChannelModel::NOPROJ:
            {
                if (dist < kSingularDistance)
                    throw std::domain_error("spd_channel: user coincides with an element");
                out.entries[m] = std::sqrt(geom.A / FOUR_PI) / dist *
                                 std::exp(cx_double(0.0, -k0 * dist));
                break;
            }
            case ChannelModel::EVANESCENT:
            {
                if (dist < kSingularDistance)
                    throw std::domain_error("spd_channel: user coincides with an element");
                const double x = lambda / (TWO_PI * dist);
                const double g = r * Psi * geom.A / (FOUR_PI * dist * dist * dist) *
                                 (1.0 - x * x + x * x * x * x);
                out.entries[m] = std::sqrt(g) * std::exp(cx_double(0.0, -k0 * dist));
                break;
            }
            }
        }
        return out;
    }

    double channel_gain(const ChannelVector &h)
    {
        if (h.entries.is_empty())
            throw std::invalid_argument("channel_gain: empty channel");
        return arma::dot(arma::abs(h.entries), arma::abs(h.entries));
    }

    // Common arctan sum of the gain integral over [xa-, xa+] x [za-, za+]:
    //   int dx dz / ((x-Phi)^2 + Psi^2 + (z-Omega)^2)^{3/2}
    //     = (1/Psi) * sum_{x in X} sum_{z in Z} arctan(x z / (Psi sqrt(Psi^2+x^2+z^2)))
    // with X = {half_x +- Phi} and Z = {half_z +- Omega}.
    static double arctan_gain_sum(double half_x, double half_z, double Phi, double Psi, double Omega)
    {
        const double xs[2] = {half_x + Phi, half_x - Phi};
        const double zs[2] = {half_z + Omega, half_z - Omega};
        double acc = 0.0;
        for (double x : xs)
            for (double z : zs)
                acc += std::atan2(x * z, Psi * std::sqrt(Psi * Psi + x * x + z * z));
        return acc;
    }

    double gain_closed_form(arma::uword m_x, arma::uword m_z, double d, double A,
                            const UserPose &user)
    {
        const double Psi = user.big_psi();
        if (Psi <= 0.0)
            throw std::domain_error("gain_closed_form: user must be in front of the array plane");
        const double eps = d / user.r;
        const double half_x = 0.5 * static_cast<double>(m_x) * eps;
        const double half_z = 0.5 * static_cast<double>(m_z) * eps;
        return A / (FOUR_PI * d * d) *
               arctan_gain_sum(half_x, half_z, user.big_phi(), Psi, user.big_omega());
    }

    double gain_closed_form(const ArrayGeometry &geom, const UserPose &user, double lambda)
    {
        (void)lambda;
        if (!geom.is_grid())
            throw std::invalid_argument("gain_closed_form: requires a UPA/ULA grid");
        return gain_closed_form(geom.M_x, geom.M_z, geom.d, geom.A, user);
    }

    double gain_evanescent_asymptotic(double xi_r, double r, double big_psi, double lambda)
    {
        if (r * big_psi <= 0.0)
            throw std::invalid_argument("gain_evanescent_asymptotic: r*Psi must be positive");
        const double x = (lambda / TWO_PI) / (r * big_psi);
        const double x2 = x * x;
        return 0.5 * xi_r * (1.0 - x2 / 3.0 + x2 * x2 / 5.0);
    }

    double correlation(const arma::cx_vec &h1, const arma::cx_vec &h2)
    {
        const double n1 = arma::norm(h1), n2 = arma::norm(h2);
        if (n1 <= 0.0 || n2 <= 0.0)
            throw std::invalid_argument("correlation: zero channel");
        double rho = std::abs(arma::cdot(h1, h2)) / (n1 * n2);
        return std::min(rho, 1.0);
    }

    double correlation(const ChannelVector &h1, const ChannelVector &h2)
    {
        return correlation(h1.entries, h2.entries);
    }

    std::complex<double> cap_green(const arma::vec3 &r_point, const arma::vec3 &s_point,
                                   double lambda, GreenVariant variant)
    {
        const double dist = arma::norm(r_point - s_point);
        if (dist < 1e-6) // singularity guard for continuous apertures
            throw std::domain_error("cap_green: coincident points");
        const double k0 = TWO_PI / lambda;
        const cx_double scalar = std::exp(cx_double(0.0, -k0 * dist)) / (FOUR_PI * dist);

        switch (variant)
        {
        case GreenVariant::SCALAR:
            return scalar;
        case GreenVariant::PROJ:
        {
            const double proj = std::abs(r_point[1] - s_point[1]) / dist;
            return scalar * std::sqrt(proj);
        }
        case GreenVariant::EVANESCENT:
        {
            const double x = lambda / (TWO_PI * dist);
            return scalar * cx_double(1.0 - x * x, x);
        }
        case GreenVariant::FRESNEL:
        {
            const double r = arma::norm(r_point);
            const double Phi = r_point[0] / r, Omega = r_point[2] / r;
            const double sx = s_point[0], sz = s_point[2];
            const double phase = k0 * (r - sx * Phi - sz * Omega +
                                       (sx * sx * (1.0 - Phi * Phi) + sz * sz * (1.0 - Omega * Omega)) /
                                           (2.0 * r));
            return std::exp(cx_double(0.0, -phase)) / (FOUR_PI * r);
        }
        }
        return scalar;
    }

    double cap_gain(const ArrayGeometry &aperture, const UserPose &user, double lambda,
                    CapGainMethod method, double rel_tol)
    {
        if (!aperture.is_cap())
            throw std::invalid_argument("cap_gain: needs a CAP aperture");
        const double Psi = user.big_psi();
        if (Psi <= 0.0)
            throw std::domain_error("cap_gain: user must be in front of the aperture plane");

        if (method == CapGainMethod::CLOSED)
        {
            const double half_x = 0.5 * aperture.L_x / user.r;
            const double half_z = 0.5 * aperture.L_z / user.r;
            return arctan_gain_sum(half_x, half_z, user.big_phi(), Psi, user.big_omega()) / FOUR_PI;
        }

        // 4 pi * int |h(r,s)|^2 ds  with h the projected kernel
        (void)lambda; // the power kernel is wavelength-free
        const arma::vec3 rv = user.cartesian();
        auto integrand = [&](double sx, double sz) -> std::complex<double> {
            const arma::vec3 s = {sx, 0.0, sz};
            const double dist = arma::norm(rv - s);
            return std::complex<double>(std::abs(rv[1]) / (FOUR_PI * dist * dist * dist), 0.0);
        };
        const double hz = (aperture.layout == Layout::CAP_PLANAR) ? 0.5 * aperture.L_z : 0.0;
        if (aperture.layout == Layout::CAP_LINEAR)
        {
            // degenerate z-extent: treat as planar with a vanishing strip is not
            // meaningful; the closed form handles L_z -> 0 as zero gain
            throw std::invalid_argument("cap_gain: QUADRATURE needs a planar aperture");
        }
        auto val = integrate_2d(integrand, -0.5 * aperture.L_x, 0.5 * aperture.L_x, -hz, hz, rel_tol);
        return val.real();
    }

    double cap_correlation(const ArrayGeometry &aperture, const UserPose &u1, const UserPose &u2,
                           double lambda, CapCorrMethod method, double rel_tol)
    {
        if (!aperture.is_cap())
            throw std::invalid_argument("cap_correlation: needs a CAP aperture");
        if (aperture.L_x <= 0.0 && aperture.L_z <= 0.0)
            throw std::invalid_argument("cap_correlation: degenerate aperture");

        if (method == CapCorrMethod::ERF_APPROX)
        {
            // linear aperture on the x-axis, both users in the x-y plane:
            // |int_{-1/2}^{1/2} exp(j (x D a1 + D^2 b1 x^2)) dx| in closed erf form
            const double D = aperture.L_x;
            const double th1 = u1.theta, th2 = u2.theta;
            const double a1 = TWO_PI / lambda * (std::cos(th2) - std::cos(th1));
            const double b1 = TWO_PI / lambda *
                              (std::sin(th1) * std::sin(th1) / (2.0 * u1.r) -
                               std::sin(th2) * std::sin(th2) / (2.0 * u2.r));
            return std::min(std::abs(fresnel_unit_integral(D * a1, D * D * b1)), 1.0);
        }

        const arma::vec3 r1 = u1.cartesian(), r2 = u2.cartesian();
        const double hx = 0.5 * std::max(aperture.L_x, 0.0);
        const double hz = 0.5 * std::max(aperture.L_z, 0.0);
        const int panels = std::max(8, static_cast<int>(2.0 * std::max(aperture.L_x, aperture.L_z) / lambda));

        auto kern = [&](const arma::vec3 &rv, double sx, double sz) {
            return cap_green(rv, {sx, 0.0, sz}, lambda, GreenVariant::PROJ);
        };
        auto cross = [&](double sx, double sz) {
            return std::conj(kern(r1, sx, sz)) * kern(r2, sx, sz);
        };
        auto p1 = [&](double sx, double sz) {
            auto v = kern(r1, sx, sz);
            return std::complex<double>(std::norm(v), 0.0);
        };
        auto p2 = [&](double sx, double sz) {
            auto v = kern(r2, sx, sz);
            return std::complex<double>(std::norm(v), 0.0);
        };

        std::complex<double> num, e1, e2;
        if (aperture.layout == Layout::CAP_LINEAR)
        {
            num = integrate_1d([&](double x) { return cross(x, 0.0); }, -hx, hx, rel_tol, panels);
            e1 = integrate_1d([&](double x) { return p1(x, 0.0); }, -hx, hx, rel_tol, panels);
            e2 = integrate_1d([&](double x) { return p2(x, 0.0); }, -hx, hx, rel_tol, panels);
        }
        else
        {
            num = integrate_2d(cross, -hx, hx, -hz, hz, rel_tol, panels);
            e1 = integrate_2d(p1, -hx, hx, -hz, hz, rel_tol, panels);
            e2 = integrate_2d(p2, -hx, hx, -hz, hz, rel_tol, panels);
        }
        const double den = std::sqrt(e1.real() * e2.real());
        if (den <= 0.0)
            throw std::domain_error("cap_correlation: degenerate kernel energy");
        return std::min(std::abs(num) / den, 1.0);
    }

    ChannelVector multipath_channel(const ArrayGeometry &geom, const UserPose &user,
                                    const std::vector<Scatterer> &scatterers, double lambda,
                                    std::uint64_t rng_seed)
    {
        ChannelVector los = spd_channel(geom, user, lambda, ChannelModel::EXACT);
        Rng rng(rng_seed);
        const arma::vec3 user_pos = user.cartesian();
        // user terminal modeled as a hypothetical isotropic element of aperture lambda^2/(4 pi)
        const double user_aperture = lambda * lambda / FOUR_PI;

        for (const Scatterer &sc : scatterers)
        {
            if (sc.rcs_variance < 0.0)
                throw std::invalid_argument("multipath_channel: negative RCS variance");
            const cx_double beta = std::sqrt(sc.rcs_variance) * rng.cgaussian();
            ChannelVector bs_leg = spd_channel(geom, sc.pose, lambda, ChannelModel::EXACT);
            const double hop = arma::norm(user_pos - sc.pose.cartesian());
            if (hop < kSingularDistance)
                throw std::domain_error("multipath_channel: scatterer coincides with the user");
            const cx_double user_leg = std::sqrt(user_aperture / FOUR_PI) / hop *
                                       std::exp(cx_double(0.0, -TWO_PI / lambda * hop));
            los.entries += beta * user_leg * bs_leg.entries;
        }
        return los;
    }

} // namespace nfcsim
