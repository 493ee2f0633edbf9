#include <doctest.h>

#include <cmath>

#include "nfcsim/geometry.hpp"

using namespace nfcsim;

TEST_CASE("ULA M=3 d=0.5 positions are symmetric about the origin")
{
    const auto g = ArrayGeometry::ula(3, 0.5, 0.2, 'x');
    CHECK(g.n_elements() == 3);
    CHECK(g.positions(0, 0) == doctest::Approx(-0.5));
    CHECK(g.positions(0, 1) == doctest::Approx(0.0));
    CHECK(g.positions(0, 2) == doctest::Approx(0.5));
    CHECK(arma::norm(g.positions.row(1)) == 0.0);
    CHECK(arma::norm(g.positions.row(2)) == 0.0);
}

TEST_CASE("UPA 3x3 d=1 is the integer grid in the x-z plane")
{
    const auto g = ArrayGeometry::upa(3, 3, 1.0, 0.5);
    CHECK(g.n_elements() == 9);
    for (arma::uword i = 0; i < 9; i++)
    {
        CHECK(g.positions(0, i) == doctest::Approx(std::round(g.positions(0, i))));
        CHECK(g.positions(1, i) == 0.0);
        CHECK(g.positions(2, i) == doctest::Approx(std::round(g.positions(2, i))));
    }
    CHECK(g.L_x == doctest::Approx(3.0));
    CHECK(g.aperture() == doctest::Approx(2.0 * std::sqrt(2.0)));
}

TEST_CASE("UCA M=4 D=2 lies on the unit circle with max pairwise distance 2")
{
    const auto g = ArrayGeometry::uca(4, 2.0, 0.1);
    CHECK(g.radius == doctest::Approx(1.0));
    double max_dist = 0.0;
    for (arma::uword i = 0; i < 4; i++)
    {
        CHECK(arma::norm(g.positions.col(i)) == doctest::Approx(1.0).epsilon(1e-13));
        for (arma::uword j = 0; j < 4; j++)
            max_dist = std::max(max_dist, arma::norm(g.positions.col(i) - g.positions.col(j)));
    }
    CHECK(std::abs(max_dist - 2.0) < 1e-12 * 2.0);
}

TEST_CASE("SPD constructors reject invalid input")
{
    CHECK_THROWS(ArrayGeometry::upa(4, 3, 0.5, 0.1));   // even count
    CHECK_THROWS(ArrayGeometry::upa(3, 3, 0.5, 0.3));   // A > d^2
    CHECK_THROWS(ArrayGeometry::ula(8, -0.5, 0.1));     // spacing <= 0
    CHECK_THROWS(ArrayGeometry::uca(5, 2.0, 0.1));      // odd circle
    CHECK_THROWS(ArrayGeometry::cap_linear(0.0));
}

TEST_CASE("centroid of constructed SPD layouts is the origin")
{
    for (const auto &g : {ArrayGeometry::upa(5, 7, 0.25, 0.05),
                          ArrayGeometry::ula(16, 0.1, 0.005),
                          ArrayGeometry::uca(12, 3.0, 0.01),
                          ArrayGeometry::uniform_grid(8, 8, 0.3, 0.05)})
    {
        const arma::vec c = arma::mean(g.positions, 1);
        CHECK(arma::norm(c) < 1e-12 * g.aperture());
    }
}

TEST_CASE("user pose direction cosines are a unit vector and |cartesian| = r")
{
    const UserPose u(12.5, 0.4, 1.1);
    const double s = u.big_phi() * u.big_phi() + u.big_psi() * u.big_psi() +
                     u.big_omega() * u.big_omega();
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(arma::norm(u.cartesian()) == doctest::Approx(12.5).epsilon(1e-13));
    CHECK_THROWS(UserPose(-1.0, 0.0, 0.0));
}

TEST_CASE("field boundaries reproduce the reference Rayleigh distances")
{
    const double c0 = 299792458.0;
    // 4 m aperture at 3.5 GHz -> 373.3 m
    const auto b1 = field_boundaries(4.0, 0.01, c0 / 3.5e9);
    CHECK(b1.rayleigh == doctest::Approx(373.3).epsilon(1e-3));
    // and 2986.7 m at 28 GHz
    const auto b2 = field_boundaries(4.0, 0.01, c0 / 28e9);
    CHECK(b2.rayleigh == doctest::Approx(2986.7).epsilon(1e-3));
    const auto b3 = field_boundaries(1.0, 1.0, 2.0);
    CHECK(b3.rayleigh == doctest::Approx(1.0));
    CHECK_THROWS(field_boundaries(0.0, 1.0, 1.0));
}

TEST_CASE("rayleigh distance is monotone in aperture and wavelength")
{
    double prev = 0.0;
    for (double da : {0.5, 1.0, 2.0, 4.0})
    {
        const double r = field_boundaries(da, 0.1, 0.01).rayleigh;
        CHECK(r > prev);
        prev = r;
    }
    prev = 1e30;
    for (double lam : {0.001, 0.01, 0.1, 1.0})
    {
        const double r = field_boundaries(2.0, 0.1, lam).rayleigh;
        CHECK(r < prev);
        prev = r;
    }
}
