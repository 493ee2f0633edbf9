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

#ifndef NFCSIM_CAPACITY_HPP
#define NFCSIM_CAPACITY_HPP

#include <complex>
#include <string>
#include <vector>

#include <armadillo>

#include "nfcsim/channel.hpp"

namespace nfcsim
{
    // Two-user decoding/encoding order. U2_FIRST means user 2 is processed
    // first: SIC decodes user 2 against interference (dual-MAC view) or DPC
    // encodes user 2 first (BC view), leaving user 1 interference-free.
    enum class UserOrder
    {
        U2_FIRST, // user 1 ends up interference-free
        U1_FIRST  // user 2 ends up interference-free
    };

    enum class RegionKind
    {
        MAC_PENTAGON,
        BC_HULL,
        UPPER_RECT
    };

    struct RatePoint
    {
        double r1 = 0.0, r2 = 0.0; // bits/s/Hz
        bool corner = false;
        std::string tag; // decoding/encoding order label for corners
    };

    struct RateRegion
    {
        std::vector<RatePoint> points; // boundary polyline, R1 ascending
        RegionKind kind = RegionKind::MAC_PENTAGON;

        // every successive boundary segment must have nonincreasing slope
        bool concave(double tol = 1e-9) const;
        std::string to_csv() const; // R1,R2,corner per row
    };

    struct BeamformerSet
    {
        arma::cx_mat vectors;      // M x K beamformers
        arma::vec powers;          // per-user |w_k|^2
        arma::vec rates;           // per-user bits/s/Hz
        UserOrder order = UserOrder::U2_FIRST;
    };

    // Coefficients of the CAP dual currents in the span of the two conjugated
    // user kernels: j_k(s) = alpha_k1 h^H(r_1, s) + alpha_k2 h^H(r_2, s).
    struct DualCurrentCoeffs
    {
        std::complex<double> alpha11, alpha12; // current of user 1
        std::complex<double> alpha21, alpha22; // current of user 2
        arma::vec2 powers;                     // radiated power per current
        arma::vec2 rates;                      // per-user bits/s/Hz
        UserOrder order = UserOrder::U2_FIRST;
    };

    LinkStats link_stats(const arma::cx_vec &h1, const arma::cx_vec &h2);

    // Two-user closed form, snr = P_m / sigma^2 shared by both users.
    double mac_sum_capacity(const LinkStats &stats, double snr);
    // K-user log-det at per-user maximum power.
    double mac_sum_capacity_k(const arma::cx_mat &channels, const arma::vec &powers, double sigma2);
    double mac_upper_bound(const LinkStats &stats, double snr);

    RateRegion mac_region_two_user(const LinkStats &stats, double snr);

    // Checks all 2^K - 1 subset constraints of the K-user MAC region.
    bool mac_region_k_feasible(const arma::cx_mat &channels, const arma::vec &powers,
                               double sigma2, const arma::vec &rate_tuple);

    struct BcSumCapacity
    {
        double capacity = 0.0; // bits/s/Hz
        double p1 = 0.0, p2 = 0.0; // optimal dual-MAC power split (snr units)
    };

    // snr_budget = P_b / sigma^2; closed-form optimal split of the dual MAC.
    BcSumCapacity bc_sum_capacity(const LinkStats &stats, double snr_budget);

    // K-user concave maximization over the power simplex (projected gradient).
    double bc_sum_capacity_k(const arma::cx_mat &channels, double power, double sigma2,
                             double grad_tol = 1e-8, int max_iter = 20000);

    // Dual-MAC corner rates for a (p1, p2) split, Eqs. of the duality transform.
    void dual_mac_corner_rates(const LinkStats &stats, double p1, double p2, UserOrder order,
                               double &r1, double &r2);

    BeamformerSet dpc_beamformers(const arma::cx_vec &h1, const arma::cx_vec &h2,
                                  double p1, double p2, double sigma2, UserOrder order);

    RateRegion bc_region(const LinkStats &stats, double snr_budget, arma::uword grid_size = 128);

    double bc_upper_bound(const LinkStats &stats, double snr_budget);

    // Capacity-achieving CAP source currents for the dual-MAC split (p1, p2),
    // expressed in the span of the conjugated kernels. rho_complex is the
    // complex kernel inner product with |rho_complex| = rho_bar sqrt(a1 a2).
    DualCurrentCoeffs cap_bc_dual_currents(double a1_bar, double a2_bar, double rho_bar,
                                           std::complex<double> rho_complex, double p1, double p2,
                                           UserOrder order);

} // namespace nfcsim

#endif
