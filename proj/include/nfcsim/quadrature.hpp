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

#ifndef NFCSIM_QUADRATURE_HPP
#define NFCSIM_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace nfcsim
{
    // Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]
    void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

    // Adaptive 1D integration with panel bisection; rel_tol is relative to the
    // running magnitude of the integral (abs_floor guards the zero integral).
    // max_depth bounds the recursion per panel; the initial interval is split
    // into init_panels before refinement (useful for oscillatory integrands).
    std::complex<double> integrate_1d(const std::function<std::complex<double>(double)> &f,
                                      double a, double b,
                                      double rel_tol = 1e-8, int init_panels = 8,
                                      int max_depth = 18);

    // Adaptive 2D integration over the rectangle [ax,bx] x [az,bz], evaluated as
    // an iterated integral with adaptive rules along both axes.
    std::complex<double> integrate_2d(const std::function<std::complex<double>(double, double)> &f,
                                      double ax, double bx, double az, double bz,
                                      double rel_tol = 1e-8, int init_panels = 8);

} // namespace nfcsim

#endif
