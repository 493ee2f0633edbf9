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

#ifndef NFCSIM_SPECIAL_HPP
#define NFCSIM_SPECIAL_HPP

#include <complex>

namespace nfcsim
{
    using cx_double = std::complex<double>;

    // Faddeeva function w(z) = exp(-z^2) * erfc(-i z) for Im(z) >= 1.
    // Midpoint-rule evaluation of the Stieltjes integral, accurate to ~1e-14
    // away from the real axis.
    cx_double faddeeva_w(cx_double z);

    // Error function of a complex argument.
    // Accurate to better than 1e-12 on the domain exercised by the Fresnel-type
    // integrals in this library (arguments within ~60 degrees of the real axis,
    // including the e^{+-j pi/4} rays). Arguments close to the imaginary axis
    // with |z| > 3 grow like exp(|z|^2) and are outside the supported domain.
    cx_double complex_erf(cx_double z);

    // Integral of exp(j*beta*u^2) over the real segment [a, b], in closed erf form.
    cx_double fresnel_segment(double beta, double a, double b);

    // Integral of exp(j*(alpha*x + beta*x^2)) over x in [-1/2, 1/2].
    // Falls back to the sinc expression when |beta| < beta_eps.
    cx_double fresnel_unit_integral(double alpha, double beta, double beta_eps = 1e-6);

} // namespace nfcsim

#endif
