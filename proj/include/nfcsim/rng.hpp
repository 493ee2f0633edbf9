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

#ifndef NFCSIM_RNG_HPP
#define NFCSIM_RNG_HPP

#include <complex>
#include <cstdint>

#include <armadillo>

namespace nfcsim
{
    // Deterministic stream with explicit draw formulas so that results are
    // bit-identical across standard libraries and runs.
    class Rng
    {
      public:
        explicit Rng(std::uint64_t seed) : state_(seed) {}

        std::uint64_t next_u64(); // splitmix64 step
        double uniform();         // [0, 1)
        double uniform(double lo, double hi);
        double gaussian();                 // N(0, 1), Box-Muller
        std::complex<double> cgaussian();  // CN(0, 1)
        arma::cx_vec cgaussian_vec(arma::uword n, double variance = 1.0);
        arma::cx_mat cgaussian_mat(arma::uword rows, arma::uword cols, double variance = 1.0);

      private:
        std::uint64_t state_;
        bool have_spare_ = false;
        double spare_ = 0.0;
    };

    // Declared per-trial seed splitter: trials draw from independent streams
    // derived from (seed, index) so that trial order and thread count do not
    // change the results.
    std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace nfcsim

#endif
