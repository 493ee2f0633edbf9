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

#include "nfcsim/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nfcsim
{
    static constexpr double LOG2E = 1.4426950408889634074;

    static double log2_1p(double x) { return std::log1p(x) * LOG2E; }

    bool RateRegion::concave(double tol) const
    {
        for (const auto &p : points)
            if (p.r1 < -tol || p.r2 < -tol)
                return false;
        for (size_t i = 0; i + 2 < points.size(); i++)
        {
            const double dx1 = points[i + 1].r1 - points[i].r1;
            const double dy1 = points[i + 1].r2 - points[i].r2;
            const double dx2 = points[i + 2].r1 - points[i + 1].r1;
            const double dy2 = points[i + 2].r2 - points[i + 1].r2;
            if (dx1 * dy2 - dy1 * dx2 > tol) // left turn = convex dent
                return false;
        }
        return true;
    }

    std::string RateRegion::to_csv() const
    {
        std::ostringstream os;
        os << "R1 [bit/s/Hz],R2 [bit/s/Hz],corner\n";
        char buf[96];
        for (const auto &p : points)
        {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%d\n", p.r1, p.r2, p.corner ? 1 : 0);
            os << buf;
        }
        return os.str();
    }

    LinkStats link_stats(const arma::cx_vec &h1, const arma::cx_vec &h2)
    {
        LinkStats s;
        const double n1 = arma::norm(h1), n2 = arma::norm(h2);
        if (n1 <= 0.0 || n2 <= 0.0)
            throw std::invalid_argument("link_stats: zero channel");
        s.a1 = n1 * n1;
        s.a2 = n2 * n2;
        s.rho = std::min(std::abs(arma::cdot(h1, h2)) / (n1 * n2), 1.0);
        return s;
    }

    double mac_sum_capacity(const LinkStats &s, double snr)
    {
        const double cross = snr * snr * s.a1 * s.a2 * (1.0 - s.rho * s.rho);
        return log2_1p(snr * (s.a1 + s.a2) + cross);
    }

    double mac_sum_capacity_k(const arma::cx_mat &channels, const arma::vec &powers, double sigma2)
    {
        const arma::uword K = channels.n_cols;
        if (powers.n_elem != K)
            throw std::invalid_argument("mac_sum_capacity_k: power vector length mismatch");
        arma::cx_mat scaled = channels;
        for (arma::uword k = 0; k < K; k++)
            scaled.col(k) *= std::sqrt(powers[k]);
        arma::cx_mat gram = scaled.t() * scaled / sigma2;
        gram.diag() += 1.0;
        const std::complex<double> ld = arma::log_det(gram);
        return ld.real() * LOG2E;
    }

    double mac_upper_bound(const LinkStats &s, double snr)
    {
        return log2_1p(snr * s.a1) + log2_1p(snr * s.a2);
    }

    RateRegion mac_region_two_user(const LinkStats &s, double snr)
    {
        if (snr <= 0.0)
            throw std::invalid_argument("mac_region_two_user: snr must be positive");
        const double c1 = log2_1p(snr * s.a1);
        const double c2 = log2_1p(snr * s.a2);
        const double csum = mac_sum_capacity(s, snr);

        RateRegion reg;
        reg.kind = RegionKind::MAC_PENTAGON;
        reg.points.push_back({0.0, c2, false, ""});
        reg.points.push_back({csum - c2, c2, true, "P2:SIC 1->2"});
        reg.points.push_back({c1, csum - c1, true, "P1:SIC 2->1"});
        reg.points.push_back({c1, 0.0, false, ""});
        // rho = 0 collapses the two corners into one rectangle vertex
        if (std::abs((csum - c2) - c1) < 1e-12 && std::abs((csum - c1) - c2) < 1e-12)
        {
            reg.points.erase(reg.points.begin() + 2);
            reg.points[1].tag = "P1=P2";
        }
        return reg;
    }

    bool mac_region_k_feasible(const arma::cx_mat &channels, const arma::vec &powers,
                               double sigma2, const arma::vec &rate_tuple)
    {
        const arma::uword K = channels.n_cols;
        if (K > 20)
            throw std::invalid_argument("mac_region_k_feasible: K > 20 subsets are intractable");
        if (rate_tuple.n_elem != K || powers.n_elem != K)
            throw std::invalid_argument("mac_region_k_feasible: length mismatch");

        for (std::uint32_t mask = 1; mask < (1u << K); mask++)
        {
            std::vector<arma::uword> subset;
            double rate_sum = 0.0;
            for (arma::uword k = 0; k < K; k++)
                if (mask & (1u << k))
                {
                    subset.push_back(k);
                    rate_sum += rate_tuple[k];
                }
            arma::cx_mat hs(channels.n_rows, subset.size());
            arma::vec ps(subset.size());
            for (arma::uword i = 0; i < subset.size(); i++)
            {
                hs.col(i) = channels.col(subset[i]);
                ps[i] = powers[subset[i]];
            }
            if (rate_sum > mac_sum_capacity_k(hs, ps, sigma2) + 1e-12)
                return false;
        }
        return true;
    }

    BcSumCapacity bc_sum_capacity(const LinkStats &s, double snr_budget)
    {
        if (snr_budget <= 0.0)
            throw std::invalid_argument("bc_sum_capacity: power budget must be positive");
        const double P = snr_budget;
        const double cross = s.a1 * s.a2 * (1.0 - s.rho * s.rho);

        BcSumCapacity out;
        if (cross <= 1e-300)
        {
            // parallel channels: all power to the stronger gain
            if (std::abs(s.a1 - s.a2) < 1e-15)
                out.p1 = 0.5 * P;
            else
                out.p1 = (s.a1 > s.a2) ? P : 0.0;
        }
        else
        {
            const double delta = (s.a1 - s.a2) / cross;
            if (delta <= -P)
                out.p1 = 0.0;
            else if (delta >= P)
                out.p1 = P;
            else
                out.p1 = 0.5 * P + 0.5 * delta;
        }
        out.p2 = P - out.p1;
        out.capacity = log2_1p(out.p1 * s.a1 + out.p2 * s.a2 + out.p1 * out.p2 * cross);
        return out;
    }

    void dual_mac_corner_rates(const LinkStats &s, double p1, double p2, UserOrder order,
                               double &r1, double &r2)
    {
        const double num = p1 * s.a1 + p2 * s.a2 +
                           p1 * p2 * s.a1 * s.a2 * (1.0 - s.rho * s.rho);
        if (order == UserOrder::U2_FIRST)
        {
            // user 2 encoded first: user 1 is interference-free
            r2 = log2_1p(p2 * s.a2);
            r1 = log2_1p(num) - r2;
        }
        else
        {
            r1 = log2_1p(p1 * s.a1);
            r2 = log2_1p(num) - r1;
        }
    }

    BeamformerSet dpc_beamformers(const arma::cx_vec &h1, const arma::cx_vec &h2,
                                  double p1, double p2, double sigma2, UserOrder order)
    {
        if (p1 < 0.0 || p2 < 0.0)
            throw std::invalid_argument("dpc_beamformers: negative power");
        const double n1 = arma::norm(h1), n2 = arma::norm(h2);
        if (n1 <= 0.0 || n2 <= 0.0)
            throw std::invalid_argument("dpc_beamformers: zero channel");

        const arma::cx_vec &ha = (order == UserOrder::U2_FIRST) ? h1 : h2; // interference-free user
        const arma::cx_vec &hb = (order == UserOrder::U2_FIRST) ? h2 : h1; // encoded-first user
        const double pa = (order == UserOrder::U2_FIRST) ? p1 : p2;
        const double pb = (order == UserOrder::U2_FIRST) ? p2 : p1;

        // (I + (pb/sigma2) hb hb^H)^{-1} ha via the rank-1 Woodbury identity
        const double c = pb / sigma2;
        const double nb2 = arma::dot(arma::conj(hb), hb).real();
        const arma::cx_vec inv_ha = ha - (c * arma::cdot(hb, ha) / (1.0 + c * nb2)) * hb;
        const double quad = arma::cdot(ha, inv_ha).real();
        arma::cx_vec wa = (pa > 0.0) ? arma::cx_vec(std::sqrt(pa / quad) * inv_ha)
                                     : arma::cx_vec(arma::zeros<arma::cx_vec>(ha.n_elem));

        const double leak = std::norm(arma::cdot(hb, wa)); // |hb^H wa|^2
        arma::cx_vec wb = std::sqrt(pb * (1.0 + leak / sigma2)) * hb / arma::norm(hb);

        BeamformerSet out;
        out.order = order;
        out.vectors.set_size(h1.n_elem, 2);
        out.rates.set_size(2);
        out.powers.set_size(2);

        const arma::cx_vec &w1 = (order == UserOrder::U2_FIRST) ? wa : wb;
        const arma::cx_vec &w2 = (order == UserOrder::U2_FIRST) ? wb : wa;
        out.vectors.col(0) = w1;
        out.vectors.col(1) = w2;
        out.powers[0] = std::pow(arma::norm(w1), 2);
        out.powers[1] = std::pow(arma::norm(w2), 2);

        // DPC rates: the interference-free user sees only noise, the other
        // treats the first beam as noise
        const double sig_a = std::norm(arma::cdot(ha, wa));
        const double sig_b = std::norm(arma::cdot(hb, wb));
        const double ra = log2_1p(sig_a / sigma2);
        const double rb = log2_1p(sig_b / (sigma2 + leak));
        out.rates[0] = (order == UserOrder::U2_FIRST) ? ra : rb;
        out.rates[1] = (order == UserOrder::U2_FIRST) ? rb : ra;
        return out;
    }

    RateRegion bc_region(const LinkStats &s, double snr_budget, arma::uword grid_size)
    {
        if (grid_size < 2)
            throw std::invalid_argument("bc_region: grid_size must be >= 2");
        std::vector<RatePoint> pts;
        pts.reserve(2 * grid_size);
        for (arma::uword i = 0; i < grid_size; i++)
        {
            const double p1 = snr_budget * static_cast<double>(i) / static_cast<double>(grid_size - 1);
            const double p2 = snr_budget - p1;
            double r1, r2;
            dual_mac_corner_rates(s, p1, p2, UserOrder::U2_FIRST, r1, r2);
            pts.push_back({r1, r2, true, "DPC 2->1"});
            dual_mac_corner_rates(s, p1, p2, UserOrder::U1_FIRST, r1, r2);
            pts.push_back({r1, r2, true, "DPC 1->2"});
        }

        // upper concave hull, R1 ascending (monotone chain)
        std::sort(pts.begin(), pts.end(), [](const RatePoint &a, const RatePoint &b) {
            return (a.r1 < b.r1) || (a.r1 == b.r1 && a.r2 > b.r2);
        });
        std::vector<RatePoint> hull;
        for (const auto &p : pts)
        {
            while (hull.size() >= 2)
            {
                const auto &a = hull[hull.size() - 2];
                const auto &b = hull[hull.size() - 1];
                const double cr = (b.r1 - a.r1) * (p.r2 - b.r2) - (b.r2 - a.r2) * (p.r1 - b.r1);
                if (cr >= -1e-14)
                    hull.pop_back(); // b is under the chord a-p
                else
                    break;
            }
            hull.push_back(p);
        }
        RateRegion reg;
        reg.kind = RegionKind::BC_HULL;
        reg.points = std::move(hull);
        return reg;
    }

    double bc_upper_bound(const LinkStats &s, double snr_budget)
    {
        const double P = snr_budget;
        if (s.a1 <= 0.0 && s.a2 <= 0.0)
            return 0.0;
        if (s.a1 <= 0.0)
            return log2_1p(P * s.a2);
        if (s.a2 <= 0.0)
            return log2_1p(P * s.a1);
        // two-channel water-filling
        const double mu = 0.5 * (P + 1.0 / s.a1 + 1.0 / s.a2);
        double p1 = mu - 1.0 / s.a1;
        double p2 = mu - 1.0 / s.a2;
        if (p1 < 0.0)
        {
            p1 = 0.0;
            p2 = P;
        }
        else if (p2 < 0.0)
        {
            p1 = P;
            p2 = 0.0;
        }
        return log2_1p(p1 * s.a1) + log2_1p(p2 * s.a2);
    }

    // Euclidean projection onto {p >= 0, sum p = total}
    static arma::vec project_simplex(arma::vec v, double total)
    {
        const arma::uword n = v.n_elem;
        arma::vec u = arma::sort(v, "descend");
        double css = 0.0, tau = 0.0;
        arma::uword rho = 0;
        for (arma::uword j = 0; j < n; j++)
        {
            css += u[j];
            const double t = (css - total) / static_cast<double>(j + 1);
            if (u[j] - t > 0.0)
            {
                rho = j + 1;
                tau = t;
            }
        }
        (void)rho;
        return arma::clamp(v - tau, 0.0, arma::datum::inf);
    }

    double bc_sum_capacity_k(const arma::cx_mat &channels, double power, double sigma2,
                             double grad_tol, int max_iter)
    {
        const arma::uword K = channels.n_cols;
        if (K < 1)
            throw std::invalid_argument("bc_sum_capacity_k: need at least one user");
        const arma::cx_mat gram = channels.t() * channels; // K x K

        auto objective = [&](const arma::vec &p) {
            arma::cx_mat m = gram;
            const arma::vec sq = arma::sqrt(p);
            for (arma::uword i = 0; i < K; i++)
                for (arma::uword j = 0; j < K; j++)
                    m(i, j) *= sq[i] * sq[j] / sigma2;
            m.diag() += 1.0;
            return arma::log_det(m).real() * LOG2E;
        };
        auto gradient = [&](const arma::vec &p) {
            // d/dp_k log2 det(sigma2 I + H diag(p) H^H)
            //   = log2(e) * h_k^H S^{-1} h_k, reduced to K x K via Woodbury
            const arma::vec sq = arma::sqrt(p);
            arma::cx_mat m(K, K);
            for (arma::uword i = 0; i < K; i++)
                for (arma::uword j = 0; j < K; j++)
                    m(i, j) = gram(i, j) * sq[i] * sq[j];
            m.diag() += sigma2;
            arma::cx_mat inner = arma::solve(m, arma::cx_mat(gram.each_col() % arma::cx_vec(sq, arma::zeros(K))));
            arma::vec g(K);
            for (arma::uword k = 0; k < K; k++)
            {
                std::complex<double> corr(0.0, 0.0);
                for (arma::uword i = 0; i < K; i++)
                    corr += gram(k, i) * sq[i] * inner(i, k);
                g[k] = (gram(k, k).real() - corr.real()) / sigma2 * LOG2E;
            }
            return g;
        };

        arma::vec p(K, arma::fill::value(power / static_cast<double>(K)));
        double f = objective(p);
        double step = power;
        for (int it = 0; it < max_iter; it++)
        {
            const arma::vec g = gradient(p);
            if (arma::norm(project_simplex(p + g, power) - p) <= grad_tol)
                return f;
            bool improved = false;
            while (step >= 1e-18 * power)
            {
                arma::vec cand = project_simplex(p + step * g, power);
                const double fc = objective(cand);
                if (fc > f + 1e-14)
                {
                    p = std::move(cand);
                    f = fc;
                    step *= 2.0;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved)
                return f; // no ascent direction left at floating-point resolution
        }
        throw std::runtime_error("bc_sum_capacity_k: projected gradient did not converge; best value " +
                                 std::to_string(f));
    }

    DualCurrentCoeffs cap_bc_dual_currents(double a1_bar, double a2_bar, double rho_bar,
                                           std::complex<double> rho_complex, double p1, double p2,
                                           UserOrder order)
    {
        if (p1 < 0.0 || p2 < 0.0)
            throw std::invalid_argument("cap_bc_dual_currents: negative power");
        if (std::abs(std::abs(rho_complex) - rho_bar * std::sqrt(a1_bar * a2_bar)) >
            1e-9 * (1.0 + rho_bar * std::sqrt(a1_bar * a2_bar)))
            throw std::invalid_argument("cap_bc_dual_currents: |rho_complex| inconsistent with rho_bar");
        if (a1_bar * a2_bar * (1.0 - rho_bar * rho_bar) <= 0.0 && p1 > 0.0 && p2 > 0.0)
            throw std::domain_error("cap_bc_dual_currents: degenerate two-kernel span");

        // symmetric in the user swap; solve for (first, second) = encoding order
        const bool swap = (order == UserOrder::U1_FIRST);
        const double aa = swap ? a2_bar : a1_bar; // interference-free user gain
        const double ab = swap ? a1_bar : a2_bar;
        const double pa = swap ? p2 : p1;
        const double pb = swap ? p1 : p2;
        const std::complex<double> rho_ab = swap ? std::conj(rho_complex) : rho_complex;

        const double shrink = pb / (1.0 + pb * ab);
        const double na = std::sqrt(aa - shrink * std::norm(rho_ab));

        // current of the interference-free user: (f_a - shrink * rho * f_b) scaled
        const std::complex<double> ca1 = std::sqrt(pa) / na;
        const std::complex<double> ca2 = -std::sqrt(pa) * shrink * rho_ab / na;

        // cross-channel response of that current at the other user
        const std::complex<double> leak = ca1 * rho_ab + ca2 * ab;
        const std::complex<double> cb2 = std::sqrt(pb * (1.0 + std::norm(leak)) / ab);

        // responses and rates (unit-noise normalization)
        const std::complex<double> own_a = ca1 * aa + ca2 * std::conj(rho_ab);
        const std::complex<double> own_b = cb2 * ab;
        const double rate_a = std::log2(1.0 + std::norm(own_a));
        const double rate_b = std::log2(1.0 + std::norm(own_b) / (1.0 + std::norm(leak)));

        // radiated powers in the two-kernel span
        const double pow_a = std::norm(ca1) * aa + std::norm(ca2) * ab +
                             2.0 * std::real(ca1 * std::conj(ca2) * rho_ab);
        const double pow_b = std::norm(cb2) * ab;

        DualCurrentCoeffs out;
        out.order = order;
        if (!swap)
        {
            out.alpha11 = ca1;
            out.alpha12 = ca2;
            out.alpha21 = 0.0;
            out.alpha22 = cb2;
            out.powers = {pow_a, pow_b};
            out.rates = {rate_a, rate_b};
        }
        else
        {
            // user 2 is the interference-free one; its current mixes (f_2, f_1)
            out.alpha21 = ca2; // coefficient on h^H(r_1, s)
            out.alpha22 = ca1; // coefficient on h^H(r_2, s)
            out.alpha11 = cb2;
            out.alpha12 = 0.0;
            out.powers = {pow_b, pow_a};
            out.rates = {rate_b, rate_a};
        }
        return out;
    }

} // namespace nfcsim
