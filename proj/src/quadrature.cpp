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

#include "nfcsim/quadrature.hpp"

#include <cmath>

namespace nfcsim
{
    void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights)
    {
        nodes.assign(n, 0.0);
        weights.assign(n, 0.0);
        const double pi = 3.141592653589793238462643;
        for (int i = 0; i < (n + 1) / 2; i++)
        {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5)); // Tricomi initial guess
            double pp = 0.0;
            for (int it = 0; it < 100; it++)
            {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; k++)
                {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15)
                    break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            double w = 2.0 / ((1.0 - x * x) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
    }

    namespace
    {
        struct Gl8
        {
            std::vector<double> x, w;
            Gl8() { gauss_legendre(8, x, w); }
        };

        std::complex<double> gl8_panel(const std::function<std::complex<double>(double)> &f,
                                       double a, double b)
        {
            static const Gl8 rule;
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            std::complex<double> s(0.0, 0.0);
            for (int i = 0; i < 8; i++)
                s += rule.w[i] * f(c + h * rule.x[i]);
            return s * h;
        }

        std::complex<double> adapt(const std::function<std::complex<double>(double)> &f,
                                   double a, double b, std::complex<double> whole,
                                   double tol, int depth)
        {
            const double m = 0.5 * (a + b);
            const std::complex<double> left = gl8_panel(f, a, m);
            const std::complex<double> right = gl8_panel(f, m, b);
            const std::complex<double> refined = left + right;
            if (depth <= 0 || std::abs(refined - whole) <= tol)
                return refined;
            return adapt(f, a, m, left, tol * 0.5, depth - 1) +
                   adapt(f, m, b, right, tol * 0.5, depth - 1);
        }
    } // namespace

    std::complex<double> integrate_1d(const std::function<std::complex<double>(double)> &f,
                                      double a, double b, double rel_tol, int init_panels,
                                      int max_depth)
    {
        if (init_panels < 1)
            init_panels = 1;
        // first pass to size the tolerance
        double scale = 0.0;
        std::vector<std::complex<double>> coarse(init_panels);
        const double h = (b - a) / init_panels;
        for (int i = 0; i < init_panels; i++)
        {
            coarse[i] = gl8_panel(f, a + i * h, a + (i + 1) * h);
            scale += std::abs(coarse[i]);
        }
        const double tol = rel_tol * (scale + 1e-300) / init_panels;
        std::complex<double> total(0.0, 0.0);
        for (int i = 0; i < init_panels; i++)
            total += adapt(f, a + i * h, a + (i + 1) * h, coarse[i], tol, max_depth);
        return total;
    }

    std::complex<double> integrate_2d(const std::function<std::complex<double>(double, double)> &f,
                                      double ax, double bx, double az, double bz,
                                      double rel_tol, int init_panels)
    {
        // iterated integral; the inner rule runs one decade tighter
        auto outer = [&](double x) {
            return integrate_1d([&](double z) { return f(x, z); }, az, bz,
                                rel_tol * 0.1, init_panels);
        };
        return integrate_1d(outer, ax, bx, rel_tol, init_panels);
    }

} // namespace nfcsim
