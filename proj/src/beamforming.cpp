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

#include "nfcsim/beamforming.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "nfcsim/quadrature.hpp"
#include "nfcsim/special.hpp"

namespace nfcsim
{
    static constexpr double PI = 3.141592653589793238462643;
    static constexpr double TWO_PI = 6.283185307179586476925287;
    static constexpr double LOG2E = 1.4426950408889634074;

    void WsrProblem::validate() const
    {
        if (channels.n_cols < 1 || channels.n_rows < 1)
            throw std::invalid_argument("WsrProblem: empty channel set");
        if (power <= 0.0)
            throw std::invalid_argument("WsrProblem: power budget must be positive");
        if (weights.n_elem != channels.n_cols || noise.n_elem != channels.n_cols)
            throw std::invalid_argument("WsrProblem: weights/noise length mismatch");
        if (weights.min() < 0.0 || arma::sum(weights) <= 0.0)
            throw std::invalid_argument("WsrProblem: weights must be nonnegative, not all zero");
        if (noise.min() <= 0.0)
            throw std::invalid_argument("WsrProblem: noise powers must be positive");
        if (arma::norm(channels, "fro") <= 0.0)
            throw std::invalid_argument("WsrProblem: all-zero channels");
    }

    BeamformerSet matched_filter(const arma::cx_mat &channels, double power,
                                 const arma::vec &power_split, const arma::vec &noise)
    {
        const arma::uword K = channels.n_cols;
        if (power_split.n_elem != K || std::abs(arma::sum(power_split) - 1.0) > 1e-9 ||
            power_split.min() < 0.0)
            throw std::invalid_argument("matched_filter: power split must lie on the simplex");
        BeamformerSet out;
        out.vectors.set_size(channels.n_rows, K);
        out.powers.set_size(K);
        out.rates.set_size(K);
        for (arma::uword k = 0; k < K; k++)
        {
            const double nk = arma::norm(channels.col(k));
            if (nk <= 0.0)
                throw std::invalid_argument("matched_filter: zero channel");
            out.vectors.col(k) = std::sqrt(power * power_split[k]) * channels.col(k) / nk;
            out.powers[k] = power * power_split[k];
        }
        for (arma::uword k = 0; k < K; k++)
        {
            double interf = 0.0;
            for (arma::uword i = 0; i < K; i++)
                if (i != k)
                    interf += std::norm(arma::cdot(channels.col(k), out.vectors.col(i)));
            const double sig = std::norm(arma::cdot(channels.col(k), out.vectors.col(k)));
            out.rates[k] = std::log1p(sig / (interf + noise[k])) * LOG2E;
        }
        return out;
    }

    double wsr_eval(const arma::cx_mat &channels, const arma::cx_mat &beamformers,
                    const arma::vec &weights, const arma::vec &noise)
    {
        if (channels.n_rows != beamformers.n_rows || channels.n_cols != beamformers.n_cols)
            throw std::invalid_argument("wsr_eval: shape mismatch");
        const arma::uword K = channels.n_cols;
        const arma::cx_mat cross = channels.t() * beamformers; // cross(k,i) = h_k^H w_i
        double wsr = 0.0;
        for (arma::uword k = 0; k < K; k++)
        {
            double interf = 0.0;
            for (arma::uword i = 0; i < K; i++)
                if (i != k)
                    interf += std::norm(cross(k, i));
            wsr += weights[k] * std::log1p(std::norm(cross(k, k)) / (interf + noise[k])) * LOG2E;
        }
        return wsr;
    }

    namespace
    {
        // Shared state of one WMMSE outer iteration. A is kept implicit:
        //   A X = H diag(c) (H^H X) + c0 X
        struct WmmseCore
        {
            const arma::cx_mat &H;  // M x K
            const arma::vec &wts;
            const arma::vec &noise;
            double P;

            arma::vec u, c;     // MSE weights, combined coefficients
            arma::cx_vec v;     // receivers
            double c0 = 0.0;    // identity coefficient of A
            arma::cx_mat B;     // M x K right-hand side

            explicit WmmseCore(const WsrProblem &p)
                : H(p.channels), wts(p.weights), noise(p.noise), P(p.power),
                  u(p.n_users()), c(p.n_users()), v(p.n_users()) {}

            // u, v from the current W (first-order optimality of the MSE form)
            void update_receivers(const arma::cx_mat &W)
            {
                const arma::uword K = H.n_cols;
                const arma::cx_mat cross = H.t() * W; // K x K
                const double fro2 = std::pow(arma::norm(W, "fro"), 2);
                c0 = 0.0;
                for (arma::uword k = 0; k < K; k++)
                {
                    double total = noise[k] / P * fro2;
                    for (arma::uword i = 0; i < K; i++)
                        total += std::norm(cross(k, i));
                    const double own = std::norm(cross(k, k));
                    const double mse_den = total - own;
                    u[k] = own / std::max(mse_den, 1e-300) + 1.0;
                    v[k] = cross(k, k) / total;
                    c[k] = wts[k] * u[k] * std::norm(v[k]);
                    c0 += c[k] * noise[k] / P;
                }
                B.set_size(H.n_rows, K);
                for (arma::uword k = 0; k < K; k++)
                    B.col(k) = wts[k] * u[k] * std::conj(v[k]) * H.col(k);
            }

            arma::cx_mat apply_a(const arma::cx_mat &X) const
            {
                arma::cx_mat HX = H.t() * X; // K x K'
                HX.each_col() %= arma::cx_vec(c, arma::zeros(c.n_elem));
                return H * HX + c0 * X;
            }

            // g(W) = tr(W^H A W) - 2 Re tr(W^H B)
            double g_value(const arma::cx_mat &W) const
            {
                const arma::cx_mat AW = apply_a(W);
                return arma::accu(arma::real(arma::conj(W) % AW)) -
                       2.0 * arma::accu(arma::real(arma::conj(W) % B));
            }

            arma::cx_mat dense_a() const
            {
                arma::cx_mat A(H.n_rows, H.n_rows, arma::fill::zeros);
                for (arma::uword k = 0; k < H.n_cols; k++)
                    A += c[k] * (H.col(k) * H.col(k).t());
                A.diag() += c0;
                return A;
            }

            arma::cx_mat solve_inverse() const
            {
                return arma::solve(dense_a(), B, arma::solve_opts::likely_sympd);
            }

            // per-user reduced solves on the masked coordinate sets
            arma::cx_mat solve_inverse_masked(const arma::umat &mask) const
            {
                const arma::cx_mat A = dense_a();
                arma::cx_mat W(H.n_rows, H.n_cols, arma::fill::zeros);
                for (arma::uword k = 0; k < H.n_cols; k++)
                {
                    const arma::uvec rows = arma::find(mask.col(k));
                    if (rows.is_empty())
                        continue;
                    const arma::cx_mat As = A.submat(rows, rows);
                    const arma::cx_vec bk = B.col(k);
                    const arma::cx_vec bs = bk.elem(rows);
                    arma::cx_vec ws = arma::solve(As, bs, arma::solve_opts::likely_sympd);
                    for (arma::uword i = 0; i < rows.n_elem; i++)
                        W(rows[i], k) = ws[i];
                }
                return W;
            }

            // steepest descent with the exact per-step rate; with a mask this is
            // projected descent onto the per-user supports and converges to the
            // subspace minimizer
            void gradient_steps(arma::cx_mat &W, int steps, double res_tol,
                                const arma::umat *mask) const
            {
                const double b_scale = arma::norm(B, "fro");
                for (int s = 0; s < steps; s++)
                {
                    arma::cx_mat psi = apply_a(W) - B;
                    if (mask)
                        psi %= arma::conv_to<arma::cx_mat>::from(*mask);
                    const double num = std::pow(arma::norm(psi, "fro"), 2);
                    if (std::sqrt(num) <= res_tol * (b_scale + 1e-300))
                        break;
                    const arma::cx_mat apsi = apply_a(psi);
                    const double den = arma::accu(arma::real(arma::conj(psi) % apsi));
                    if (den <= 0.0)
                        break;
                    W -= (num / den) * psi;
                }
            }
        };

        arma::cx_mat rescaled(const arma::cx_mat &W, double P)
        {
            const double fro = arma::norm(W, "fro");
            if (fro <= 0.0)
                return W;
            return std::sqrt(P) / fro * W;
        }

        void fill_solution(WsrSolution &sol, const WsrProblem &p, const arma::cx_mat &Wbar)
        {
            sol.beamformers = rescaled(Wbar, p.power);
            const arma::uword K = p.n_users();
            sol.per_user_rates.set_size(K);
            const arma::cx_mat cross = p.channels.t() * sol.beamformers;
            for (arma::uword k = 0; k < K; k++)
            {
                double interf = 0.0;
                for (arma::uword i = 0; i < K; i++)
                    if (i != k)
                        interf += std::norm(cross(k, i));
                sol.per_user_rates[k] = std::log1p(std::norm(cross(k, k)) / (interf + p.noise[k])) * LOG2E;
            }
            sol.wsr = arma::dot(p.weights, sol.per_user_rates);
        }

        arma::cx_mat matched_filter_init(const WsrProblem &p)
        {
            const arma::uword K = p.n_users();
            arma::cx_mat W(p.dim(), K);
            for (arma::uword k = 0; k < K; k++)
            {
                const double nk = arma::norm(p.channels.col(k));
                if (nk > 0.0)
                    W.col(k) = std::sqrt(p.power / static_cast<double>(K)) * p.channels.col(k) / nk;
                else
                    W.col(k).zeros();
            }
            return W;
        }

        // Support mask for the restricted solve. Per-user supports are detected
        // from the coefficient magnitudes; the beamformers are confined to their
        // union. Masking a single user's beamformer to its own support alone can
        // raise the interference it causes (dropping terms of a complex sum can
        // grow its magnitude), whereas every block update already lives in
        // span{h_1, ..., h_K}, which the union contains, so the union mask is
        // lossless on synthesized channels.
        arma::umat support_masks(const arma::cx_mat &channels, double eps_supp)
        {
            if (eps_supp >= 1.0)
                throw std::invalid_argument("support restriction: eps_supp leaves an empty support");
            arma::uvec joint(channels.n_rows, arma::fill::zeros);
            for (arma::uword k = 0; k < channels.n_cols; k++)
            {
                const double top = arma::abs(channels.col(k)).max();
                if (top <= 0.0)
                    throw std::invalid_argument("support restriction: all-zero channel");
                bool any = false;
                for (arma::uword n = 0; n < channels.n_rows; n++)
                    if (std::abs(channels(n, k)) > eps_supp * top)
                    {
                        joint[n] = 1;
                        any = true;
                    }
                if (!any)
                    throw std::invalid_argument("support restriction: empty support for a user");
            }
            arma::umat mask(channels.n_rows, channels.n_cols);
            mask.each_col() = joint;
            return mask;
        }

        void apply_mask(arma::cx_mat &W, const arma::umat &mask)
        {
            for (arma::uword k = 0; k < W.n_cols; k++)
                for (arma::uword n = 0; n < W.n_rows; n++)
                    if (!mask(n, k))
                        W(n, k) = 0.0;
        }

        WsrSolution wmmse_loop(const WsrProblem &problem, const WmmseOptions &opts,
                               const arma::umat *mask, const arma::cx_mat *init = nullptr)
        {
            problem.validate();
            WmmseCore core(problem);
            arma::cx_mat W = init ? *init : matched_filter_init(problem);
            if (mask)
                apply_mask(W, *mask);

            WsrSolution sol;
            double prev = wsr_eval(problem.channels, rescaled(W, problem.power),
                                   problem.weights, problem.noise);
            sol.trajectory.push_back(prev);
            sol.converged = false;
            for (int it = 0; it < opts.max_iter; it++)
            {
                core.update_receivers(W);
                if (opts.variant == WmmseVariant::INVERSE)
                    W = mask ? core.solve_inverse_masked(*mask) : core.solve_inverse();
                else
                    core.gradient_steps(W, opts.inner_steps, opts.inner_tol, mask);
                if (mask)
                    apply_mask(W, *mask);
                if (!W.is_finite())
                    throw std::runtime_error("wmmse: non-finite iterate at outer iteration " +
                                             std::to_string(it));
                const double wsr = wsr_eval(problem.channels, rescaled(W, problem.power),
                                            problem.weights, problem.noise);
                sol.trajectory.push_back(wsr);
                sol.iterations = static_cast<arma::uword>(it + 1);
                if (std::abs(wsr - prev) < opts.tol)
                {
                    prev = wsr;
                    sol.converged = true;
                    break;
                }
                prev = wsr;
            }
            fill_solution(sol, problem, W);
            return sol;
        }
    } // namespace

    std::string solution_to_json(const WsrSolution &sol)
    {
        nlohmann::json j;
        j["wsr"] = sol.wsr;
        j["iterations"] = sol.iterations;
        j["converged"] = sol.converged;
        j["per_user_rates"] = std::vector<double>(sol.per_user_rates.begin(),
                                                  sol.per_user_rates.end());
        j["trajectory"] = sol.trajectory;
        auto &bf = j["beamformers"] = nlohmann::json::array();
        for (arma::uword k = 0; k < sol.beamformers.n_cols; k++)
        {
            std::vector<double> interleaved;
            interleaved.reserve(2 * sol.beamformers.n_rows);
            for (arma::uword m = 0; m < sol.beamformers.n_rows; m++)
            {
                interleaved.push_back(sol.beamformers(m, k).real());
                interleaved.push_back(sol.beamformers(m, k).imag());
            }
            bf.push_back(interleaved);
        }
        return j.dump(2);
    }

    WsrSolution wmmse(const WsrProblem &problem, const WmmseOptions &opts)
    {
        return wmmse_loop(problem, opts, nullptr);
    }

    WsrSolution wavenumber_wmmse(const WsrProblem &problem, bool restrict_support,
                                 double eps_supp, const WmmseOptions &opts)
    {
        if (!restrict_support)
            return wmmse_loop(problem, opts, nullptr);
        const arma::umat mask = support_masks(problem.channels, eps_supp);
        return wmmse_loop(problem, opts, &mask);
    }

    WsrSolution robust_l1(const WsrProblem &problem, const RobustOptions &opts)
    {
        problem.validate();
        if (opts.rho0 < 0.0)
            throw std::invalid_argument("robust_l1: rho0 must be nonnegative");

        WmmseCore core(problem);
        arma::cx_mat W = matched_filter_init(problem);

        auto soft = [](arma::cx_mat &X, double tau) {
            for (auto &z : X)
            {
                const double mag = std::abs(z);
                z = (mag > tau) ? z * ((mag - tau) / mag) : std::complex<double>(0.0, 0.0);
            }
        };
        auto l1_norm = [](const arma::cx_mat &X) { return arma::accu(arma::abs(X)); };

        WsrSolution sol;
        sol.converged = false;
        // composite surrogate: sum_k w_k (u_k e_k - log2 u_k) + rho0 |W|_1;
        // the trajectory stores its negation so that it is nondecreasing
        double prev_obj = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_iter; it++)
        {
            if (arma::norm(W, "fro") <= 1e-14 * std::sqrt(problem.power))
            {
                W.zeros(); // fully thresholded: zero solution
                sol.iterations = static_cast<arma::uword>(it);
                sol.converged = true;
                break;
            }
            core.update_receivers(W);
            const double uv_part = arma::dot(problem.weights,
                                             arma::vec(core.u - arma::log2(core.u)));
            // proximal gradient steps on g(W) + rho0 |W|_1 with backtracking
            for (int s = 0; s < opts.inner_steps; s++)
            {
                const arma::cx_mat psi = core.apply_a(W) - core.B;
                const double num = std::pow(arma::norm(psi, "fro"), 2);
                if (num <= 1e-30)
                    break;
                const arma::cx_mat apsi = core.apply_a(psi);
                const double den = arma::accu(arma::real(arma::conj(psi) % apsi));
                if (den <= 0.0)
                    break;
                double alpha = num / den;
                const double f_cur = core.g_value(W) + opts.rho0 * l1_norm(W);
                bool moved = false;
                for (int bt = 0; bt < 40; bt++)
                {
                    arma::cx_mat cand = W - alpha * psi;
                    soft(cand, alpha * opts.rho0);
                    const double f_new = core.g_value(cand) + opts.rho0 * l1_norm(cand);
                    if (f_new <= f_cur + 1e-12 * std::abs(f_cur))
                    {
                        W = std::move(cand);
                        moved = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if (!moved)
                    break;
            }
            if (!W.is_finite())
                throw std::runtime_error("robust_l1: non-finite iterate at outer iteration " +
                                         std::to_string(it));
            const double obj = core.g_value(W) + opts.rho0 * l1_norm(W) + uv_part;
            sol.trajectory.push_back(-obj);
            sol.iterations = static_cast<arma::uword>(it + 1);
            if (std::abs(prev_obj - obj) < opts.tol * (1.0 + std::abs(obj)))
            {
                sol.converged = true;
                break;
            }
            prev_obj = obj;
        }
        fill_solution(sol, problem, W);
        if (arma::norm(W, "fro") <= 1e-14 * std::sqrt(problem.power))
        {
            sol.beamformers.zeros(problem.dim(), problem.n_users());
            sol.per_user_rates.zeros(problem.n_users());
            sol.wsr = 0.0;
        }
        return sol;
    }

    double interference(double r_k, double theta_k, double dr, double dtheta,
                        arma::uword m, double d, double lambda, InterferenceMethod method)
    {
        const double r_i = r_k + dr;
        if (r_k <= 0.0 || r_i <= 0.0)
            throw std::invalid_argument("interference: ranges must stay positive");
        const double theta_i = theta_k + dtheta;

        if (method == InterferenceMethod::ERF)
        {
            const double a = TWO_PI / lambda * d * (std::cos(theta_i) - std::cos(theta_k));
            const double b = TWO_PI / lambda * d * d *
                             (std::sin(theta_k) * std::sin(theta_k) / (2.0 * r_k) -
                              std::sin(theta_i) * std::sin(theta_i) / (2.0 * r_i));
            const double M = static_cast<double>(m);
            return std::min(std::abs(fresnel_unit_integral(M * a, M * M * b)), 1.0);
        }

        // direct sum over the true element distances (ULA on the x-axis)
        const double ck = std::cos(theta_k);
        const double ci = std::cos(theta_i);
        std::complex<double> acc(0.0, 0.0);
        const double half = 0.5 * static_cast<double>(m - 1);
        for (arma::uword j = 0; j < m; j++)
        {
            const double x = (static_cast<double>(j) - half) * d;
            const double dist_k = std::sqrt(r_k * r_k + x * x - 2.0 * r_k * x * ck);
            const double dist_i = std::sqrt(r_i * r_i + x * x - 2.0 * r_i * x * ci);
            acc += std::exp(std::complex<double>(0.0, -TWO_PI / lambda * (dist_i - dist_k)));
        }
        return std::abs(acc) / static_cast<double>(m);
    }

    double g_function(double x)
    {
        const double ax = std::abs(x);
        if (ax < 1e-12)
            return 1.0;
        const double t = 0.5 * std::sqrt(ax);
        const cx_double z(t * 0.70710678118654752, -t * 0.70710678118654752);
        return std::sqrt(PI / ax) * std::abs(complex_erf(z));
    }

    RdmaRegion rdma_region(double r_k, double theta_k, arma::uword m, double d, double lambda)
    {
        if (r_k <= 0.0 || d <= 0.0 || lambda <= 0.0 || m < 1)
            throw std::invalid_argument("rdma_region: inputs must be positive");
        const double s2 = std::sin(theta_k) * std::sin(theta_k);
        if (s2 <= 0.0)
            throw std::domain_error("rdma_region: degenerate direction (sin theta = 0)");
        RdmaRegion reg;
        const double M = static_cast<double>(m);
        reg.eta = PI * M * M * d * d * s2 / (15.0 * lambda);
        reg.lower = -r_k * r_k / (reg.eta + r_k);
        reg.upper = (r_k < reg.eta) ? r_k * r_k / (reg.eta - r_k)
                                    : std::numeric_limits<double>::infinity();
        return reg;
    }

    CapCurrent cap_matched_current(const ArrayGeometry &aperture, const UserPose &user,
                                   double lambda, double power, GreenVariant kernel,
                                   double rel_tol)
    {
        if (!aperture.is_cap())
            throw std::invalid_argument("cap_matched_current: needs a CAP aperture");
        if (user.big_psi() <= 0.0)
            throw std::domain_error("cap_matched_current: user behind the aperture plane");
        const arma::vec3 rv = user.cartesian();
        const int panels = std::max(8, static_cast<int>(2.0 * std::max(aperture.L_x, aperture.L_z) / lambda));
        auto energy_1d = [&](double x) {
            return std::complex<double>(std::norm(cap_green(rv, {x, 0.0, 0.0}, lambda, kernel)), 0.0);
        };
        auto energy_2d = [&](double x, double z) {
            return std::complex<double>(std::norm(cap_green(rv, {x, 0.0, z}, lambda, kernel)), 0.0);
        };
        double energy;
        if (aperture.layout == Layout::CAP_LINEAR)
            energy = integrate_1d(energy_1d, -0.5 * aperture.L_x, 0.5 * aperture.L_x, rel_tol, panels).real();
        else
            energy = integrate_2d(energy_2d, -0.5 * aperture.L_x, 0.5 * aperture.L_x,
                                  -0.5 * aperture.L_z, 0.5 * aperture.L_z, rel_tol, panels).real();
        if (energy <= 0.0)
            throw std::domain_error("cap_matched_current: degenerate aperture");
        CapCurrent cur;
        cur.kernel_energy = energy;
        cur.scale = std::sqrt(power / energy);
        cur.radiated_power = power;
        return cur;
    }

    WsrProblem cap_fourier_reduce(const std::vector<UserPose> &users, const ArrayGeometry &aperture,
                                  double lambda, int truncation_x, int truncation_z,
                                  double power_rad, double noise_eff, GreenVariant kernel)
    {
        if (!aperture.is_cap())
            throw std::invalid_argument("cap_fourier_reduce: needs a CAP aperture");
        if (truncation_x <= 0 || (aperture.layout == Layout::CAP_PLANAR && truncation_z <= 0))
            throw std::invalid_argument("cap_fourier_reduce: truncation limits must be positive");
        if (users.empty())
            throw std::invalid_argument("cap_fourier_reduce: no users");

        const bool planar = aperture.layout == Layout::CAP_PLANAR;
        const int nz = planar ? truncation_z : 0;
        const arma::uword n_basis = static_cast<arma::uword>(2 * truncation_x + 1) *
                                    static_cast<arma::uword>(2 * nz + 1);

        // fixed composite Gauss-Legendre grid, ~8 nodes per quarter wavelength panel
        auto make_axis = [&](double length, std::vector<double> &nodes, std::vector<double> &wts) {
            const int panels = std::max(16, static_cast<int>(4.0 * length / lambda));
            std::vector<double> gx, gw;
            gauss_legendre(8, gx, gw);
            const double h = length / panels;
            for (int p = 0; p < panels; p++)
            {
                const double c = -0.5 * length + (p + 0.5) * h;
                for (int q = 0; q < 8; q++)
                {
                    nodes.push_back(c + 0.5 * h * gx[q]);
                    wts.push_back(0.5 * h * gw[q]);
                }
            }
        };
        std::vector<double> xs, xw, zs, zw;
        make_axis(aperture.L_x, xs, xw);
        if (planar)
            make_axis(aperture.L_z, zs, zw);
        else
        {
            zs.push_back(0.0);
            zw.push_back(1.0);
        }

        const double area = planar ? aperture.L_x * aperture.L_z : aperture.L_x;
        const double basis_norm = 1.0 / std::sqrt(area);

        WsrProblem prob;
        prob.domain = WsrDomain::CAP_FOURIER;
        prob.power = power_rad;
        prob.channels.set_size(n_basis, users.size());
        prob.weights = arma::ones(users.size());
        prob.noise = arma::vec(users.size(), arma::fill::value(noise_eff));

        for (arma::uword k = 0; k < users.size(); k++)
        {
            const arma::vec3 rv = users[k].cartesian();
            arma::cx_vec coeff(n_basis, arma::fill::zeros);
            for (size_t iz = 0; iz < zs.size(); iz++)
                for (size_t ix = 0; ix < xs.size(); ix++)
                {
                    const std::complex<double> gval =
                        cap_green(rv, {xs[ix], 0.0, zs[iz]}, lambda, kernel) * (xw[ix] * zw[iz]);
                    arma::uword idx = 0;
                    for (int lz = -nz; lz <= nz; lz++)
                        for (int lx = -truncation_x; lx <= truncation_x; lx++, idx++)
                        {
                            const double ph = TWO_PI * (lx * xs[ix] / aperture.L_x +
                                                        (planar ? lz * zs[iz] / aperture.L_z : 0.0));
                            // h_f[l] = int g(r,s) psi_l^H(s) ds
                            coeff[idx] += gval * basis_norm * std::exp(std::complex<double>(0.0, -ph));
                        }
                }
            prob.channels.col(k) = coeff;
        }
        return prob;
    }

} // namespace nfcsim
