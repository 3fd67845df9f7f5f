#include <doctest.h>

#include <cmath>
#include <limits>

#include "cmanet/error.hpp"
#include "cmanet/numerics.hpp"
#include "cmanet/oracles/oracles.hpp"
#include "support.hpp"

using namespace cmanet;
namespace nm = cmanet::numerics;
using nm::chi_square_weight;
using nm::LogNormalParams;
using nm::lognormal_mean;
using nm::marcum_q1;
using nm::MarcumArgs;

TEST_CASE("erf is odd and zero at the origin") {
    CHECK(nm::erf(0.0) == 0.0);
    CHECK(nm::erf(0.7) == -nm::erf(-0.7));
    CHECK(nm::erf(0.7) + nm::erf(-0.7) == 0.0);
}

TEST_CASE("erf(1) matches the 30-term Taylor series") {
    CHECK(std::fabs(nm::erf(1.0) - oracles::erf_taylor(1.0, 30)) <= 1e-12);
}

TEST_CASE("erf is bounded and antisymmetric for random arguments") {
    test::Gen g(101);
    for (int i = 0; i < 2000; ++i) {
        const double x = g.real(-40.0, 40.0);
        INFO(test::case_label(101, i), " x=", x);
        CHECK(std::fabs(nm::erf(x)) <= 1.0);
        CHECK(std::fabs(nm::erf(x) + nm::erf(-x)) <= 1e-14);
        CHECK(std::fabs(nm::erfc(x) - (1.0 - nm::erf(x))) <= 1e-15 + 1e-15 * std::fabs(nm::erfc(x)));
    }
}

TEST_CASE("erf agrees with the series oracle on a moderate interval") {
    for (double x = -2.0; x <= 2.0; x += 0.03125) CHECK(std::fabs(nm::erf(x) - oracles::erf_taylor(x, 60)) <= 1e-12);
}

TEST_CASE("marcum_q1 closed cases") {
    CHECK(marcum_q1({2.0, 0.0}) == 1.0);
    CHECK(marcum_q1({0.0, 1.5}) == doctest::Approx(std::exp(-1.5 * 1.5 / 2.0)).epsilon(1e-14));
}

TEST_CASE("marcum_q1(1, 2) matches quadrature of the defining integral") {
    CHECK(std::fabs(marcum_q1({1.0, 2.0}) - oracles::marcum_q1_quadrature(1.0, 2.0)) <= 1e-9);
}

TEST_CASE("marcum_q1 is a probability and matches the quadrature oracle on [0,5]^2") {
    test::Gen g(202);
    for (int i = 0; i < 1000; ++i) {
        const double a = g.real(0.0, 5.0);
        const double b = g.real(0.0, 5.0);
        const double q = marcum_q1({a, b});
        INFO(test::case_label(202, i), " a=", a, " b=", b);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        CHECK(std::fabs(q - oracles::marcum_q1_quadrature(a, b)) <= 1e-8);
    }
}

TEST_CASE("MarcumArgs rejects negative arguments") {
    CHECK_THROWS_AS(MarcumArgs(-1.0, 0.0), Error);
    CHECK_THROWS_AS(MarcumArgs(0.0, -0.5), Error);
}

TEST_CASE("LogNormalParams enforces its invariants") {
    CHECK_THROWS_AS(LogNormalParams(0.0, 0.0), Error);
    CHECK_THROWS_AS(LogNormalParams(0.0, -1.0), Error);
    CHECK_THROWS_AS(LogNormalParams(std::numeric_limits<double>::infinity(), 1.0), Error);
    CHECK_THROWS_AS(LogNormalParams(std::nan(""), 1.0), Error);
}

TEST_CASE("lognormal_mean degenerates to a point mass as sigma vanishes") {
    CHECK(lognormal_mean({0.0, 1e-12}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lognormal_mean({2.0, 1e-12}) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
}

TEST_CASE("lognormal_mean(1, 0.5) is within 3 standard errors of a 1e6-sample Monte Carlo mean") {
    const auto mc = oracles::lognormal_mc_mean(1.0, 0.5, 1'000'000, 7);
    CHECK(std::fabs(lognormal_mean({1.0, 0.5}) - mc.mean) <= 3.0 * mc.std_error);
}

TEST_CASE("lognormal_mean overflow is reported") {
    CHECK_THROWS_AS(lognormal_mean({700.0, 5.0}), Error);
    try {
        lognormal_mean({700.0, 5.0});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Overflow);
    }
}

TEST_CASE("lognormal_mean is strictly increasing in mu and sigma") {
    test::Gen g(303);
    for (int i = 0; i < 500; ++i) {
        const double mu = g.real(-5.0, 5.0);
        const double sigma = g.real(0.05, 2.0);
        const double step = g.real(1e-3, 1.0);
        INFO(test::case_label(303, i));
        CHECK(lognormal_mean({mu + step, sigma}) > lognormal_mean({mu, sigma}));
        CHECK(lognormal_mean({mu, sigma + step}) > lognormal_mean({mu, sigma}));
    }
}

TEST_CASE("chi_square_weight closed forms at two degrees of freedom") {
    CHECK(chi_square_weight(2.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(chi_square_weight(2.0, 1.0) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
}

TEST_CASE("chi_square_weight(3, 1.7) matches the quadrature-normalised gamma form") {
    CHECK(std::fabs(chi_square_weight(3.0, 1.7) - oracles::chi_square_gamma_form(3.0, 1.7)) <= 1e-10);
}

TEST_CASE("chi_square_weight integrates to one") {
    for (double dof : {1.0, 2.0, 3.0, 4.5, 7.0, 12.0}) {
        const double area = oracles::integrate([dof](double x) { return chi_square_weight(dof, x); }, 0.0, 50.0 * dof);
        INFO("dof=", dof);
        CHECK(std::fabs(area - 1.0) <= 1e-6);
    }
}

TEST_CASE("chi_square_weight rejects invalid arguments") {
    CHECK_THROWS_AS(chi_square_weight(0.0, 1.0), Error);
    CHECK_THROWS_AS(chi_square_weight(-2.0, 1.0), Error);
    CHECK_THROWS_AS(chi_square_weight(2.0, -1.0), Error);
}
