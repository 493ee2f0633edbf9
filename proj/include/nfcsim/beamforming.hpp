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

#ifndef NFCSIM_BEAMFORMING_HPP
#define NFCSIM_BEAMFORMING_HPP

#include <string>
#include <vector>

#include <armadillo>

#include "nfcsim/capacity.hpp"
#include "nfcsim/channel.hpp"
#include "nfcsim/wavenumber.hpp"

namespace nfcsim
{
    enum class WsrDomain
    {
        SPATIAL,
        WAVENUMBER,
        CAP_FOURIER
    };

    // Weighted sum-rate maximization instance: K user channels (columns),
    // per-user weights and noise powers, total power budget.
    struct WsrProblem
    {
        arma::cx_mat channels; // M x K (or n x K coefficient vectors)
        arma::vec weights;     // K, >= 0, not all zero
        arma::vec noise;       // K noise powers sigma_k^2
        double power = 0.0;    // total transmit power budget
        WsrDomain domain = WsrDomain::SPATIAL;

        void validate() const;
        arma::uword n_users() const { return channels.n_cols; }
        arma::uword dim() const { return channels.n_rows; }
    };

    struct WsrSolution
    {
        arma::cx_mat beamformers; // M x K, sum_k |w_k|^2 = P
        double wsr = 0.0;         // bits/s/Hz
        arma::vec per_user_rates;
        arma::uword iterations = 0;
        std::vector<double> trajectory; // WSR after each outer iteration
        bool converged = true;
    };

    // JSON serialization of a solution; beamformer columns are emitted as
    // interleaved re/im arrays.
    std::string solution_to_json(const WsrSolution &sol);

    enum class WmmseVariant
    {
        INVERSE, // closed-form W update (matrix inverse)
        GRADIENT // inner gradient descent with the exact optimal step
    };

    struct WmmseOptions
    {
        WmmseVariant variant = WmmseVariant::INVERSE;
        double tol = 1e-8;     // outer WSR increment stop
        int max_iter = 500;    // outer iterations
        int inner_steps = 50;  // gradient variant: inner descent steps per outer pass
        double inner_tol = 1e-10; // gradient variant: residual reduction target
    };

    // Matched-filter beamfocusing with a power split on the simplex.
    BeamformerSet matched_filter(const arma::cx_mat &channels, double power,
                                 const arma::vec &power_split, const arma::vec &noise);

    // Weighted sum rate of fixed beamformers.
    double wsr_eval(const arma::cx_mat &channels, const arma::cx_mat &beamformers,
                    const arma::vec &weights, const arma::vec &noise);

    // Closed-form WMMSE on the power-constraint-free reformulation.
    WsrSolution wmmse(const WsrProblem &problem, const WmmseOptions &opts = {});

    enum class InterferenceMethod
    {
        EXACT_SUM,
        ERF
    };

    // Beamfocusing cross-correlation I(dr, dtheta) for a ULA on the x-axis,
    // users in the x-y plane at (r_k, theta_k) and (r_k + dr, theta_k + dtheta).
    double interference(double r_k, double theta_k, double dr, double dtheta,
                        arma::uword m, double d, double lambda,
                        InterferenceMethod method = InterferenceMethod::ERF);

    // g(x) = sqrt(pi/|x|) |erf(e^{-j pi/4} sqrt(x) / 2)| with g(0) = 1.
    double g_function(double x);

    struct RdmaRegion
    {
        double lower = 0.0; // m (nonpositive)
        double upper = 0.0; // m, +inf when r_k >= eta
        double eta = 0.0;   // m
    };

    // 3-dB interference region of matched-filter beamfocusing in range.
    RdmaRegion rdma_region(double r_k, double theta_k, arma::uword m, double d, double lambda);

    // WMMSE in the wavenumber domain, optionally restricting each beamformer to
    // its user's support {n : |h_a[n]| > eps_supp * max |h_a|}.
    WsrSolution wavenumber_wmmse(const WsrProblem &problem, bool restrict_support,
                                 double eps_supp = 1e-3, const WmmseOptions &opts = {});

    struct RobustOptions
    {
        double rho0 = 0.0;   // l1 regularization weight
        double tol = 1e-6;   // surrogate objective stop
        int max_iter = 300;  // outer iterations
        int inner_steps = 20;
    };

    // l1-regularized WSR maximization in the wavenumber domain (proximal
    // gradient inside the WMMSE block updates).
    WsrSolution robust_l1(const WsrProblem &problem, const RobustOptions &opts);

    struct CapCurrent
    {
        // j(s) = scale * conj(kernel(r_user, s)) over the aperture
        std::complex<double> scale;
        double radiated_power = 0.0;
        double kernel_energy = 0.0; // int |kernel|^2 ds
    };

    // Matched-filter source current for one user over a CAP aperture.
    CapCurrent cap_matched_current(const ArrayGeometry &aperture, const UserPose &user,
                                   double lambda, double power,
                                   GreenVariant kernel = GreenVariant::PROJ,
                                   double rel_tol = 1e-8);

    // Fourier-basis reduction of the CAP current design to a finite MISO WSR
    // problem: channel coefficients h_f[l] = int g(r_k, s) psi_l^H(s) ds.
    // truncation = maximum |l| per axis (linear CAP uses the x-axis only).
    WsrProblem cap_fourier_reduce(const std::vector<UserPose> &users, const ArrayGeometry &aperture,
                                  double lambda, int truncation_x, int truncation_z,
                                  double power_rad, double noise_eff,
                                  GreenVariant kernel = GreenVariant::SCALAR);

} // namespace nfcsim

#endif
