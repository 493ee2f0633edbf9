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

#include "nfcsim/rng.hpp"

#include <cmath>

namespace nfcsim
{
    std::uint64_t Rng::next_u64()
    {
        // splitmix64 (Steele, Lea, Flood 2014)
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double Rng::uniform()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double Rng::uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    double Rng::gaussian()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::complex<double> Rng::cgaussian()
    {
        // independent of the spare cache so that a CN draw consumes exactly one pair
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double r = std::sqrt(-std::log(u1)); // variance 1/2 per component
        const double t = 6.283185307179586476925287 * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    arma::cx_vec Rng::cgaussian_vec(arma::uword n, double variance)
    {
        arma::cx_vec v(n);
        const double s = std::sqrt(variance);
        for (arma::uword i = 0; i < n; i++)
            v[i] = s * cgaussian();
        return v;
    }

    arma::cx_mat Rng::cgaussian_mat(arma::uword rows, arma::uword cols, double variance)
    {
        arma::cx_mat m(rows, cols);
        const double s = std::sqrt(variance);
        for (arma::uword j = 0; j < cols; j++)
            for (arma::uword i = 0; i < rows; i++)
                m(i, j) = s * cgaussian();
        return m;
    }

    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
    {
        Rng mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
        return mix.next_u64();
    }

} // namespace nfcsim
