#include <doctest.h>

#include <cmath>
#include <complex>

#include "nfcsim/channel.hpp"
#include "nfcsim/quadrature.hpp"

using namespace nfcsim;

namespace
{
    constexpr double PI = 3.141592653589793238462643;
    constexpr double FOUR_PI = 4.0 * PI;

    double max_phase_gap(const arma::cx_vec &a, const arma::cx_vec &b)
    {
        double worst = 0.0;
        for (arma::uword i = 0; i < a.n_elem; i++)
            worst = std::max(worst, std::abs(std::arg(a[i] * std::conj(b[i]))));
        return worst;
    }
} // namespace

TEST_CASE("single element on boresight: EXACT magnitude is sqrt(A/4pi)/r")
{
    const double lambda = 0.1, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::ula(1, lambda / 2.0, A);
    const UserPose u(7.0, PI / 2.0, PI / 2.0);
    const auto h = spd_channel(g, u, lambda, ChannelModel::EXACT);
    CHECK(std::abs(h.entries[0]) == doctest::Approx(std::sqrt(A / FOUR_PI) / 7.0).epsilon(1e-12));
}

TEST_CASE("uniform-magnitude models have equal-magnitude entries")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::upa(9, 9, d, A);
    const UserPose u(5.0, PI / 3.0, PI / 3.0);
    const double expected = std::sqrt(u.big_psi() * A / FOUR_PI) / u.r;
    for (auto model : {ChannelModel::UPD, ChannelModel::FRESNEL, ChannelModel::FAR})
    {
        const auto h = spd_channel(g, u, lambda, model);
        for (const auto &e : h.entries)
            CHECK(std::abs(e) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("FAR matches EXACT phases deep in the far field")
{
    const double lambda = 0.1, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::upa(9, 9, d, A);
    const double rayleigh = field_boundaries(g.aperture(), std::sqrt(A), lambda).rayleigh;
    const UserPose u(100.0 * rayleigh, PI / 3.0, PI / 2.5);
    const auto h_far = spd_channel(g, u, lambda, ChannelModel::FAR);
    const auto h_exact = spd_channel(g, u, lambda, ChannelModel::EXACT);
    CHECK(max_phase_gap(h_far.entries, h_exact.entries) < 1e-2);
}

TEST_CASE("NOPROJ and EXACT gains agree on boresight far away")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::upa(17, 17, d, A);
    const UserPose u(500.0, PI / 2.0, PI / 2.0); // Psi = 1
    const double gp = channel_gain(spd_channel(g, u, lambda, ChannelModel::EXACT));
    const double gn = channel_gain(spd_channel(g, u, lambda, ChannelModel::NOPROJ));
    CHECK(gp / gn == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("user on an element position is a singularity for point-wise models")
{
    const double lambda = 0.1, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::ula(3, d, A);
    // coincides with the rightmost element at [d, 0, 0]
    const UserPose u(d, 0.0, PI / 2.0);
    CHECK_THROWS(spd_channel(g, u, lambda, ChannelModel::EXACT));
    CHECK_THROWS(spd_channel(g, u, lambda, ChannelModel::NOPROJ));
    CHECK_THROWS(spd_channel(g, u, lambda, ChannelModel::EVANESCENT));
}

TEST_CASE("channel_gain basics")
{
    ChannelVector h;
    h.entries = arma::zeros<arma::cx_vec>(5);
    CHECK(channel_gain(h) == 0.0);
    h.entries = arma::cx_vec(4, arma::fill::ones);
    CHECK(channel_gain(h) == doctest::Approx(4.0));
    ChannelVector empty;
    CHECK_THROWS(channel_gain(empty));
}

TEST_CASE("closed-form gain matches the element sum on the reference setup")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::uniform_grid(64, 64, d, A);
    const UserPose u(15.0, PI / 6.0, PI / 3.0);
    const double brute = channel_gain(spd_channel(g, u, lambda, ChannelModel::EXACT));
    const double closed = gain_closed_form(g, u, lambda);
    CHECK(closed == doctest::Approx(brute).epsilon(0.005));
}

TEST_CASE("closed-form gain approaches xi_r/2 for huge apertures")
{
    const double lambda = 2.0, d = lambda / 2.0, A = d * d; // xi_r = 1
    const UserPose u(10.0, PI / 2.0, PI / 2.0);
    CHECK(gain_closed_form(4096, 4096, d, A, u) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK_THROWS(gain_closed_form(64, 64, d, A, UserPose(10.0, -PI / 2.0, PI / 2.0))); // Psi < 0
}

TEST_CASE("evanescent asymptotic gain ratios")
{
    const double xi = 1.0 / PI, lambda = 0.1;
    // r Psi = lambda
    CHECK(gain_evanescent_asymptotic(xi, lambda, 1.0, lambda) / (xi / 2.0) ==
          doctest::Approx(0.9917).epsilon(2e-4));
    // r Psi -> infinity
    CHECK(gain_evanescent_asymptotic(xi, 1e9, 1.0, lambda) ==
          doctest::Approx(xi / 2.0).epsilon(1e-12));
    // r Psi = lambda / (2 pi): 1 - 1/3 + 1/5
    CHECK(gain_evanescent_asymptotic(xi, lambda / (2.0 * PI), 1.0, lambda) / (xi / 2.0) ==
          doctest::Approx(13.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("EVANESCENT model scales EXACT per-element power by 1 - x^2 + x^4")
{
    const double lambda = 0.5, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::ula(5, d, A);
    const UserPose u(1.5 * lambda, PI / 2.0, PI / 2.0);
    const auto he = spd_channel(g, u, lambda, ChannelModel::EXACT);
    const auto hv = spd_channel(g, u, lambda, ChannelModel::EVANESCENT);
    const arma::vec3 rv = u.cartesian();
    for (arma::uword m = 0; m < g.n_elements(); m++)
    {
        const double dist = arma::norm(rv - g.positions.col(m));
        const double x = lambda / (2.0 * PI * dist);
        const double ratio = std::norm(hv.entries[m]) / std::norm(he.entries[m]);
        CHECK(ratio == doctest::Approx(1.0 - x * x + x * x * x * x).epsilon(1e-12));
        CHECK(std::arg(hv.entries[m] * std::conj(he.entries[m])) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("correlation basics and the near/far dichotomy")
{
    arma::cx_vec h1 = {std::complex<double>(1.0, 0.5), std::complex<double>(0.0, 2.0)};
    CHECK(correlation(h1, arma::cx_vec(std::complex<double>(0.0, 3.0) * h1)) ==
          doctest::Approx(1.0).epsilon(1e-13));
    arma::cx_vec e1 = {1.0, 0.0}, e2 = {0.0, 1.0};
    CHECK(correlation(arma::cx_vec(e1), arma::cx_vec(e2)) == doctest::Approx(0.0));
    CHECK_THROWS(correlation(arma::cx_vec(arma::zeros<arma::cx_vec>(2)), h1));

    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;

    // far-field model: same direction is exactly parallel
    const auto g64 = ArrayGeometry::uniform_grid(64, 64, d, A);
    const UserPose ua(15.0, PI / 6.0, PI / 3.0), ub(20.0, PI / 6.0, PI / 3.0);
    const auto f1 = spd_channel(g64, ua, lambda, ChannelModel::FAR);
    const auto f2 = spd_channel(g64, ub, lambda, ChannelModel::FAR);
    CHECK(correlation(f1, f2) > 1.0 - 1e-12);

    // distinct directions decorrelate at M = 4096
    const UserPose uc(20.0, 5.0 * PI / 6.0, PI / 3.0);
    const auto f3 = spd_channel(g64, uc, lambda, ChannelModel::FAR);
    CHECK(correlation(f1, f3) < 0.05);

    // near-field EXACT separates same-direction users in range
    const auto g256 = ArrayGeometry::uniform_grid(256, 256, d, A);
    const auto n1 = spd_channel(g256, ua, lambda, ChannelModel::EXACT);
    const auto n2 = spd_channel(g256, ub, lambda, ChannelModel::EXACT);
    CHECK(correlation(n1, n2) < 0.2);
}

TEST_CASE("Fresnel phase error vs EXACT decays with range")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::upa(33, 33, d, A);
    const auto fb = field_boundaries(g.aperture(), std::sqrt(A), lambda);
    std::vector<double> errs;
    for (double r = 2.0; r < 10.0 * fb.rayleigh; r *= 1.8)
    {
        const UserPose u(r, PI / 3.0, PI / 2.0);
        const auto hf = spd_channel(g, u, lambda, ChannelModel::FRESNEL);
        const auto he = spd_channel(g, u, lambda, ChannelModel::EXACT);
        errs.push_back(max_phase_gap(hf.entries, he.entries));
        if (r > 3.0 * fb.fresnel_array)
            CHECK(errs.back() < 0.1);
    }
    for (size_t i = 1; i < errs.size(); i++)
        CHECK(errs[i] <= errs[i - 1] + 1e-9);
}

TEST_CASE("projected-aperture ratio shrinks toward endfire and with M")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const std::vector<arma::uword> Ms = {4, 16, 64, 256};
    std::vector<std::vector<double>> ratios;
    for (auto m : Ms)
    {
        const auto g = ArrayGeometry::uniform_grid(1, m, d, A);
        std::vector<double> row;
        for (int deg = 90; deg >= 10; deg -= 10)
        {
            const UserPose u(10.0, deg * PI / 180.0, PI / 2.0);
            const double pro = channel_gain(spd_channel(g, u, lambda, ChannelModel::EXACT));
            const double npro = channel_gain(spd_channel(g, u, lambda, ChannelModel::NOPROJ));
            row.push_back(pro / npro);
        }
        ratios.push_back(row);
    }
    for (const auto &row : ratios)
        for (size_t i = 1; i < row.size(); i++)
            CHECK(row[i] <= row[i - 1] + 1e-12); // decreasing away from broadside
    for (size_t m = 1; m < ratios.size(); m++)
        for (size_t i = 1; i < ratios[m].size(); i++)
            CHECK(ratios[m][i] <= ratios[m - 1][i] + 1e-12); // more pronounced with M
}

TEST_CASE("cap_green closed-form values")
{
    const double lambda = 0.2;
    const arma::vec3 origin = {0.0, 0.0, 0.0};

    // SCALAR magnitude at distance lambda
    const arma::vec3 p1 = {0.0, lambda, 0.0};
    CHECK(std::abs(cap_green(p1, origin, lambda, GreenVariant::SCALAR)) ==
          doctest::Approx(1.0 / (FOUR_PI * lambda)).epsilon(1e-13));

    // EVANESCENT power ratio at distance lambda / (2 pi): 1 - 1 + 1 = 1
    const arma::vec3 p2 = {0.0, lambda / (2.0 * PI), 0.0};
    const double ratio = std::norm(cap_green(p2, origin, lambda, GreenVariant::EVANESCENT)) /
                         std::norm(cap_green(p2, origin, lambda, GreenVariant::SCALAR));
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-13));

    // FRESNEL phase approaches SCALAR far beyond the array Fresnel distance;
    // the in-plane user keeps the dropped bilinear term at zero
    const double aperture = 1.0;
    const auto fb = field_boundaries(aperture, 0.01, lambda);
    const UserPose u(10.0 * fb.fresnel_array, PI / 3.0, PI / 2.0);
    const arma::vec3 rv = u.cartesian();
    const arma::vec3 s = {0.3, 0.0, -0.2};
    const auto g_ref = cap_green(rv, s, lambda, GreenVariant::SCALAR);
    const auto g_fre = cap_green(rv, s, lambda, GreenVariant::FRESNEL);
    CHECK(std::abs(std::arg(g_fre * std::conj(g_ref))) < 1e-2);

    CHECK_THROWS(cap_green(origin, origin, lambda, GreenVariant::SCALAR));
}

TEST_CASE("cap_gain: closed form, quadrature, and limits")
{
    const double lambda = 0.0107;
    const UserPose u(10.0, PI / 6.0, PI / 3.0);

    // 64-wavelength square aperture: closed form vs adaptive quadrature
    const auto cap = ArrayGeometry::cap_planar(64.0 * lambda, 64.0 * lambda);
    const double closed = cap_gain(cap, u, lambda, CapGainMethod::CLOSED);
    const double quad = cap_gain(cap, u, lambda, CapGainMethod::QUADRATURE, 1e-9);
    CHECK(std::abs(closed - quad) / closed < 1e-4);

    // infinite-aperture limit captures half the radiated power
    const auto huge = ArrayGeometry::cap_planar(1e7, 1e7);
    CHECK(cap_gain(huge, u, lambda, CapGainMethod::CLOSED) == doctest::Approx(0.5).epsilon(1e-5));

    CHECK_THROWS(cap_gain(cap, UserPose(10.0, -PI / 6.0, PI / 3.0), lambda));
}

TEST_CASE("SPD gain equals xi_r times the CAP gain of the same aperture")
{
    const double lambda = 0.1256, d = lambda / 2.0;
    const UserPose u(12.0, PI / 6.0, PI / 3.0);
    for (double xi : {1.0 / PI, 0.5, 1.0})
    {
        const double A = xi * d * d;
        const auto spd = ArrayGeometry::uniform_grid(96, 96, d, A);
        const auto cap = ArrayGeometry::cap_planar(spd.L_x, spd.L_z);
        const double a_spd = gain_closed_form(spd, u, lambda);
        const double a_cap = cap_gain(cap, u, lambda, CapGainMethod::CLOSED);
        CHECK(a_spd == doctest::Approx(xi * a_cap).epsilon(1e-12)); // identical integrals
        const double a_sum = channel_gain(spd_channel(spd, u, lambda, ChannelModel::EXACT));
        CHECK(a_sum == doctest::Approx(xi * a_cap).epsilon(0.01));
    }
}

TEST_CASE("cap_correlation: trivial cases and the erf approximation")
{
    const double lambda = 0.0107;
    const auto cap = ArrayGeometry::cap_linear(128.0 * lambda);
    const UserPose u1(10.0, PI / 2.2, PI / 2.0);
    CHECK(cap_correlation(cap, u1, u1, lambda, CapCorrMethod::QUADRATURE) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // same direction, far zone: quadratic term vanishes -> correlation 1
    const UserPose far1(5e4, PI / 3.0, PI / 2.0), far2(5e4 * 1.0000001, PI / 3.0, PI / 2.0);
    CHECK(cap_correlation(cap, far1, far2, lambda, CapCorrMethod::ERF_APPROX) ==
          doctest::Approx(1.0).epsilon(1e-6));

    // range-separated users: erf form tracks the quadrature oracle
    const UserPose a(10.0, PI / 2.0, PI / 2.0), b(15.0, PI / 2.0, PI / 2.0);
    const double q = cap_correlation(cap, a, b, lambda, CapCorrMethod::QUADRATURE, 1e-7);
    const double e = cap_correlation(cap, a, b, lambda, CapCorrMethod::ERF_APPROX);
    CHECK(std::abs(q - e) < 0.02);
}

TEST_CASE("multipath channel: LoS limits and seeded determinism")
{
    const double lambda = 0.1256, d = lambda / 2.0, A = lambda * lambda / FOUR_PI;
    const auto g = ArrayGeometry::upa(9, 9, d, A);
    const UserPose u(12.0, PI / 4.0, PI / 3.0);
    const auto los = spd_channel(g, u, lambda, ChannelModel::EXACT);

    const auto h0 = multipath_channel(g, u, {}, lambda, 42);
    CHECK(arma::norm(h0.entries - los.entries) == 0.0);

    std::vector<Scatterer> silent = {{UserPose(6.0, PI / 3.0, PI / 2.0), 0.0}};
    const auto h1 = multipath_channel(g, u, silent, lambda, 42);
    CHECK(arma::norm(h1.entries - los.entries) < 1e-15);

    std::vector<Scatterer> sc = {{UserPose(6.0, PI / 3.0, PI / 2.0), 0.5},
                                 {UserPose(8.0, PI / 2.5, PI / 2.2), 0.25},
                                 {UserPose(4.0, PI / 1.8, PI / 2.0), 1.0}};
    const auto d1 = multipath_channel(g, u, sc, lambda, 7);
    const auto d2 = multipath_channel(g, u, sc, lambda, 7);
    for (arma::uword i = 0; i < d1.entries.n_elem; i++)
    {
        CHECK(d1.entries[i].real() == d2.entries[i].real());
        CHECK(d1.entries[i].imag() == d2.entries[i].imag());
    }
    const auto d3 = multipath_channel(g, u, sc, lambda, 8);
    CHECK(arma::norm(d3.entries - d1.entries) > 0.0);
}
