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

#ifndef NFCSIM_CHANNEL_HPP
#define NFCSIM_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include <armadillo>

#include "nfcsim/geometry.hpp"

namespace nfcsim
{
    // Spherical-wave model ladder for SPD arrays. EXACT keeps per-element power
    // and exact phase; UPD assumes uniform power beyond the uniform-power
    // distance; FRESNEL and FAR simplify the phase; NOPROJ drops the projected
    // aperture; EVANESCENT adds the reactive power correction to EXACT.
    enum class ChannelModel
    {
        EXACT,
        UPD,
        FRESNEL,
        FAR,
        NOPROJ,
        EVANESCENT
    };

    struct ChannelVector
    {
        arma::cx_vec entries;
        ChannelModel model = ChannelModel::EXACT;
        double lambda = 0.0;
    };

    // Per-pair statistics driving the two-user capacity formulas.
    struct LinkStats
    {
        double a1 = 0.0; // channel power gain of user 1
        double a2 = 0.0; // channel power gain of user 2
        double rho = 0.0; // correlation of the normalized channels, in [0, 1]
    };

    struct Scatterer
    {
        UserPose pose;
        double rcs_variance = 0.0; // mean-square RCS (Swerling-I)
    };

    // Minimum source-observation distance before the element response is
    // treated as singular.
    constexpr double kSingularDistance = 1e-9;

    ChannelVector spd_channel(const ArrayGeometry &geom, const UserPose &user,
                              double lambda, ChannelModel model);

    double channel_gain(const ChannelVector &h);

    // Closed-form gain of a uniform x-z grid (arctan identity). The scalar
    // overload avoids materializing element positions for very large counts.
    double gain_closed_form(const ArrayGeometry &geom, const UserPose &user, double lambda);
    double gain_closed_form(arma::uword m_x, arma::uword m_z, double d, double A,
                            const UserPose &user);

    // Asymptotic gain with reactive terms, as a function of xi_r = A/d^2.
    double gain_evanescent_asymptotic(double xi_r, double r, double big_psi, double lambda);

    double correlation(const ChannelVector &h1, const ChannelVector &h2);
    double correlation(const arma::cx_vec &h1, const arma::cx_vec &h2);

    // Scalar LoS kernels for CAP apertures.
    enum class GreenVariant
    {
        SCALAR,     // e^{-j 2 pi |r-s| / lambda} / (4 pi |r-s|)
        PROJ,       // SCALAR with the projected-aperture factor sqrt(|e_y.(r-s)|/|r-s|)
        EVANESCENT, // SCALAR times (1 + j x - x^2), x = lambda / (2 pi |r-s|)
        FRESNEL     // uniform-power amplitude with Fresnel phase
    };

    std::complex<double> cap_green(const arma::vec3 &r_point, const arma::vec3 &s_point,
                                   double lambda, GreenVariant variant);

    enum class CapGainMethod
    {
        CLOSED,
        QUADRATURE
    };

    // CAP-array channel gain (4 pi * integral of |h(r,s)|^2 over the aperture).
    double cap_gain(const ArrayGeometry &aperture, const UserPose &user, double lambda,
                    CapGainMethod method = CapGainMethod::CLOSED, double rel_tol = 1e-8);

    enum class CapCorrMethod
    {
        QUADRATURE,
        ERF_APPROX
    };

    // Correlation of the projected Green kernels of two users over the aperture.
    // ERF_APPROX evaluates the closed Fresnel/erf form for linear apertures with
    // both users in the x-y plane.
    double cap_correlation(const ArrayGeometry &aperture, const UserPose &u1, const UserPose &u2,
                           double lambda, CapCorrMethod method = CapCorrMethod::QUADRATURE,
                           double rel_tol = 1e-8);

    // LoS plus Swerling-I scattered paths; components built with the EXACT model.
    ChannelVector multipath_channel(const ArrayGeometry &geom, const UserPose &user,
                                    const std::vector<Scatterer> &scatterers, double lambda,
                                    std::uint64_t rng_seed);

} // namespace nfcsim

#endif
