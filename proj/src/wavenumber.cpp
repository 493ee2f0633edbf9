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

#include "nfcsim/wavenumber.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "nfcsim/rng.hpp"

namespace nfcsim
{
    static constexpr double TWO_PI = 6.283185307179586476925287;

    WavenumberSupport wavenumber_support(double L_x, double L_z, double lambda)
    {
        if (lambda <= 0.0 || (L_x <= 0.0 && L_z <= 0.0))
            throw std::invalid_argument("wavenumber_support: need a positive aperture and wavelength");
        WavenumberSupport s;
        s.L_x = L_x;
        s.L_z = L_z;
        s.lambda = lambda;

        const int nx = (L_x > 0.0) ? static_cast<int>(std::floor(L_x / lambda + 1e-12)) : 0;
        const int nz = (L_z > 0.0) ? static_cast<int>(std::floor(L_z / lambda + 1e-12)) : 0;
        for (int lx = -nx; lx <= nx; lx++)
        {
            const double tx = (L_x > 0.0) ? lx * lambda / L_x : 0.0;
            for (int lz = -nz; lz <= nz; lz++)
            {
                const double tz = (L_z > 0.0) ? lz * lambda / L_z : 0.0;
                if (tx * tx + tz * tz <= 1.0 + 1e-12)
                    s.indices.emplace_back(lx, lz);
            }
        }
        return s;
    }

    WavenumberBasis dictionary(const ArrayGeometry &geom, const WavenumberSupport &support)
    {
        if (!geom.is_grid())
            throw std::invalid_argument("dictionary: requires an on-grid SPD geometry");
        WavenumberBasis b;
        b.L_x = support.L_x;
        b.L_z = support.L_z;
        b.lambda = support.lambda;
        b.semi_unitary_guaranteed = geom.d <= support.lambda / 2.0 + 1e-12;

        // indices congruent modulo the per-axis grid size alias to the same
        // column; keep the first representative of each congruence class
        auto mod_class = [](int l, arma::uword m) {
            const int mm = static_cast<int>(m);
            int v = l % mm;
            return (v < 0) ? v + mm : v;
        };
        std::set<std::pair<int, int>> seen;
        for (const auto &[lx, lz] : support.indices)
        {
            const auto cls = std::make_pair(mod_class(lx, geom.M_x), mod_class(lz, geom.M_z));
            if (seen.insert(cls).second)
                b.kept_indices.emplace_back(lx, lz);
        }

        const arma::uword M = geom.n_elements();
        const arma::uword n = b.kept_indices.size();
        b.dictionary.set_size(M, n);
        const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(M));
        for (arma::uword c = 0; c < n; c++)
        {
            const auto &[lx, lz] = b.kept_indices[c];
            const double fx = (support.L_x > 0.0) ? TWO_PI * lx / support.L_x : 0.0;
            const double fz = (support.L_z > 0.0) ? TWO_PI * lz / support.L_z : 0.0;
            for (arma::uword m = 0; m < M; m++)
            {
                const double ph = fx * geom.positions(0, m) + fz * geom.positions(2, m);
                b.dictionary(m, c) = inv_sqrt_m * std::exp(std::complex<double>(0.0, ph));
            }
        }
        return b;
    }

    arma::cx_vec to_wavenumber(const arma::cx_vec &h, const WavenumberBasis &basis)
    {
        if (h.n_elem != basis.m())
            throw std::invalid_argument("to_wavenumber: dimension mismatch");
        return basis.dictionary.st() * h; // Phi^T h
    }

    arma::cx_vec from_wavenumber(const arma::cx_vec &coeffs, const WavenumberBasis &basis)
    {
        if (coeffs.n_elem != basis.n())
            throw std::invalid_argument("from_wavenumber: dimension mismatch");
        return arma::conj(basis.dictionary) * coeffs; // Phi^* h_a
    }

    arma::cx_vec gamma_phases(const WavenumberBasis &basis, double range)
    {
        const double k0 = TWO_PI / basis.lambda;
        arma::cx_vec g(basis.n());
        for (arma::uword c = 0; c < basis.n(); c++)
        {
            const auto &[lx, lz] = basis.kept_indices[c];
            const double kx = (basis.L_x > 0.0) ? TWO_PI * (lx + 0.5) / basis.L_x : 0.0;
            const double kz = (basis.L_z > 0.0) ? TWO_PI * (lz + 0.5) / basis.L_z : 0.0;
            const std::complex<double> gamma = std::sqrt(std::complex<double>(k0 * k0 - kx * kx - kz * kz, 0.0));
            g[c] = std::exp(std::complex<double>(0.0, 1.0) * gamma * range);
        }
        return g;
    }

    FourierChannel sample_fourier_channel(const WavenumberBasis &basis_s,
                                          const WavenumberBasis &basis_r,
                                          const arma::mat &variance_map, double range,
                                          double lambda, std::uint64_t rng_seed,
                                          const arma::cx_mat *los_mean)
    {
        const arma::uword n_s = basis_s.n(), n_r = basis_r.n();
        if (variance_map.n_rows != n_r || variance_map.n_cols != n_s)
            throw std::invalid_argument("sample_fourier_channel: variance map shape mismatch");
        if (variance_map.min() < 0.0)
            throw std::invalid_argument("sample_fourier_channel: negative variance");
        if (los_mean && (los_mean->n_rows != n_r || los_mean->n_cols != n_s))
            throw std::invalid_argument("sample_fourier_channel: LoS mean shape mismatch");

        const double mn = static_cast<double>(basis_s.m()) * static_cast<double>(basis_r.m());
        Rng rng(rng_seed);
        arma::cx_mat wn = rng.cgaussian_mat(n_r, n_s);
        wn %= arma::conv_to<arma::cx_mat>::from(arma::sqrt(variance_map)) * std::sqrt(mn);
        if (los_mean)
            wn += *los_mean;

        // Gamma_S evaluates at the transmit plane s_y = 0 and is the identity;
        // kept for symmetry with the receive side.
        arma::cx_vec gr = gamma_phases(basis_r, range);
        arma::cx_vec gs = gamma_phases(basis_s, 0.0);

        FourierChannel out;
        out.wavenumber = wn;
        out.spatial = basis_r.dictionary * arma::diagmat(gr) * wn *
                      arma::diagmat(arma::conj(gs)) * basis_s.dictionary.t();
        (void)lambda;
        return out;
    }

    arma::mat load_variance_map_csv(const std::string &path)
    {
        arma::mat m;
        if (!m.load(path, arma::csv_ascii))
            throw std::runtime_error("load_variance_map_csv: cannot read " + path);
        return m;
    }

} // namespace nfcsim
