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

#include "nfcsim/special.hpp"

#include <cmath>
#include <stdexcept>

namespace nfcsim
{
    static constexpr double SQRT_PI = 1.7724538509055160273;

    cx_double faddeeva_w(cx_double z)
    {
        // w(z) = (i/pi) * int exp(-t^2)/(z - t) dt for Im(z) > 0.
        // Midpoint rule with step h; the residue correction term is O(exp(-2*pi*Im(z)/h))
        // and negligible for Im(z) >= 1 with h = 0.2.
        const double h = 0.2;
        const int n_max = 40; // |t| <= 8.1, exp(-t^2) < 1e-28 beyond
        cx_double acc(0.0, 0.0);
        for (int k = -n_max; k < n_max; k++)
        {
            double t = (static_cast<double>(k) + 0.5) * h;
            acc += std::exp(-t * t) / (z - t);
        }
        return cx_double(0.0, h / 3.141592653589793238462643) * acc;
    }

    static cx_double erf_series(cx_double z)
    {
        // Maclaurin series, adequate up to |z| ~ 3.2
        cx_double z2 = z * z;
        cx_double term = z;
        cx_double sum = z;
        for (int n = 1; n < 96; n++)
        {
            term *= -z2 / static_cast<double>(n);
            cx_double add = term / static_cast<double>(2 * n + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum) + 1e-300)
                break;
        }
        return sum * (2.0 / SQRT_PI);
    }

    cx_double complex_erf(cx_double z)
    {
        if (std::real(z) < 0.0)
            return -complex_erf(-z); // erf is odd

        if (std::abs(z) <= 3.0)
            return erf_series(z);

        // erf(z) = 1 - exp(-z^2) w(iz); iz lies in the upper half-plane for Re(z) >= 0
        cx_double iz(-std::imag(z), std::real(z));
        if (std::imag(iz) < 1.0)
            throw std::domain_error("complex_erf: argument outside supported domain");
        return 1.0 - std::exp(-z * z) * faddeeva_w(iz);
    }

    cx_double fresnel_segment(double beta, double a, double b)
    {
        // int_a^b exp(j*beta*u^2) du = sqrt(pi)/(2c) * (erf(c b) - erf(c a)),  c = sqrt(-j*beta)
        const double s = std::sqrt(std::abs(beta) * 0.5);
        const cx_double c = (beta >= 0.0) ? cx_double(s, -s) : cx_double(s, s);
        cx_double diff;
        if (a * b > 0.0 && std::min(std::abs(a), std::abs(b)) * std::abs(c) > 3.0)
        {
            // both endpoints on one side and far out: difference of erfc values
            // avoids the 1-1 cancellation in erf
            double sgn = (a > 0.0) ? 1.0 : -1.0;
            cx_double za = c * (sgn * a), zb = c * (sgn * b); // Re >= 0
            auto erfc_large = [](cx_double w_arg) {
                cx_double iz(-std::imag(w_arg), std::real(w_arg));
                return std::exp(-w_arg * w_arg) * faddeeva_w(iz);
            };
            cx_double ea = (std::abs(za) > 3.0) ? erfc_large(za) : (1.0 - erf_series(za));
            cx_double eb = (std::abs(zb) > 3.0) ? erfc_large(zb) : (1.0 - erf_series(zb));
            diff = sgn * (ea - eb); // erf(cb)-erf(ca) = sgn*(erfc(za)-erfc(zb))
        }
        else
        {
            diff = complex_erf(c * b) - complex_erf(c * a);
        }
        return SQRT_PI / (2.0 * c) * diff;
    }

    cx_double fresnel_unit_integral(double alpha, double beta, double beta_eps)
    {
        if (std::abs(beta) < beta_eps)
        {
            if (std::abs(alpha) < 1e-14)
                return cx_double(1.0, 0.0);
            return cx_double(std::sin(alpha * 0.5) / (alpha * 0.5), 0.0);
        }
        // complete the square: alpha*x + beta*x^2 = beta*(x + alpha/(2 beta))^2 - alpha^2/(4 beta)
        const double c0 = alpha / (2.0 * beta);
        const cx_double phase = std::exp(cx_double(0.0, -alpha * alpha / (4.0 * beta)));
        return phase * fresnel_segment(beta, c0 - 0.5, c0 + 0.5);
    }

} // namespace nfcsim
