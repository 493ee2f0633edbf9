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

#ifndef NFCSIM_WAVENUMBER_HPP
#define NFCSIM_WAVENUMBER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <armadillo>

#include "nfcsim/geometry.hpp"

namespace nfcsim
{
    // Propagating plane-wave lattice: integer pairs (l_x, l_z) inside the
    // wavenumber ellipse (l_x lambda / L_x)^2 + (l_z lambda / L_z)^2 <= 1.
    // A ULA passes L_z = 0 and enumerates the 1D rule |l lambda / L| <= 1.
    struct WavenumberSupport
    {
        std::vector<std::pair<int, int>> indices;
        double L_x = 0.0, L_z = 0.0;
        double lambda = 0.0;
        arma::uword n() const { return indices.size(); }
    };

    WavenumberSupport wavenumber_support(double L_x, double L_z, double lambda);

    // Fourier dictionary over an on-grid SPD geometry. Columns are
    //   phi(l_x, l_z) = (1/sqrt(M)) exp(j 2 pi (l_x s_x / L_x + l_z s_z / L_z)).
    // Support indices congruent modulo the grid size produce identical columns
    // on the grid; such aliased duplicates are dropped so that the dictionary
    // stays semi-unitary (Phi^H Phi = I). kept_indices lists the columns.
    struct WavenumberBasis
    {
        arma::cx_mat dictionary; // M x n
        std::vector<std::pair<int, int>> kept_indices;
        double L_x = 0.0, L_z = 0.0;
        double lambda = 0.0;
        bool semi_unitary_guaranteed = true; // false when spacing > lambda/2
        arma::uword n() const { return dictionary.n_cols; }
        arma::uword m() const { return dictionary.n_rows; }
    };

    WavenumberBasis dictionary(const ArrayGeometry &geom, const WavenumberSupport &support);

    // h_a = Phi^T h and h = Phi^* h_a. The round trip is the projection
    // Phi^* Phi^T h; it is the identity on channels synthesized in the column
    // space of Phi^*.
    arma::cx_vec to_wavenumber(const arma::cx_vec &h, const WavenumberBasis &basis);
    arma::cx_vec from_wavenumber(const arma::cx_vec &coeffs, const WavenumberBasis &basis);

    struct FourierChannel
    {
        arma::cx_mat spatial;    // N x M
        arma::cx_mat wavenumber; // n_R x n_S (includes the LoS mean)
    };

    // Correlated-Rayleigh Fourier plane-wave channel:
    //   H = Phi_R Gamma_R (sqrt(MN) * (Htilde .* sigma) + Hbar) Gamma_S^H Phi_S^H
    // with Htilde i.i.d. CN(0,1) and variance_map = sigma^2 entrywise.
    // los_mean (optional, n_R x n_S) is the deterministic wavenumber-domain mean
    // Hbar, given in the same (already scaled) units as the random term.
    FourierChannel sample_fourier_channel(const WavenumberBasis &basis_s,
                                          const WavenumberBasis &basis_r,
                                          const arma::mat &variance_map, double range,
                                          double lambda, std::uint64_t rng_seed,
                                          const arma::cx_mat *los_mean = nullptr);

    // Receive-side phase factors Gamma_R = diag(exp(j gamma(k) r)) for the kept
    // support cells, with gamma the (possibly evanescent) y-axis wavenumber.
    arma::cx_vec gamma_phases(const WavenumberBasis &basis, double range);

    // CSV grid of per-cell variances (rows = receive indices, columns = transmit).
    arma::mat load_variance_map_csv(const std::string &path);

} // namespace nfcsim

#endif
