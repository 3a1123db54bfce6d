// SPDX-License-Identifier: Apache-2.0
//
// iflab - integer-forcing outage laboratory
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/beta.hpp>

#include "iflab/special_functions.hpp"

using namespace iflab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("incomplete beta: closed-form values")
{
    for (double x : {0.0, 0.1, 0.5, 0.93, 1.0})
        CHECK_THAT(incomplete_beta(x, 1, 1), WithinAbs(x, 1e-14));
    CHECK_THAT(incomplete_beta(0.5, 2, 2), WithinRel(1.0 / 12.0, 1e-12));
    CHECK_THAT(incomplete_beta(1.0, 2, 2), WithinRel(1.0 / 6.0, 1e-12));
    // x^2/2 - x^3/3
    for (double x : {0.05, 0.3, 0.77})
        CHECK_THAT(incomplete_beta(x, 2, 2), WithinRel(x * x / 2 - x * x * x / 3, 1e-12));
}

TEST_CASE("incomplete beta: full integral equals the Beta function")
{
    for (double a : {0.5, 1.0, 2.5, 7.0})
        for (double b : {0.5, 1.0, 3.0, 11.0})
            CHECK_THAT(incomplete_beta(1.0, a, b), WithinRel(std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b), 1e-10));
}

TEST_CASE("regularised incomplete beta agrees with Boost.Math and is monotone")
{
    for (double a : {1.0, 2.0, 3.0, 0.7})
        for (double b : {1.0, 2.0, 5.0, 1.3}) {
            double prev = -1.0;
            for (int i = 0; i <= 40; ++i) {
                const double x = i / 40.0;
                const double v = regularized_incomplete_beta(x, a, b);
                CHECK_THAT(v, WithinAbs(boost::math::ibeta(a, b, x), 1e-12));
                CHECK(v >= prev);
                prev = v;
            }
        }
}

TEST_CASE("incomplete beta rejects bad parameters")
{
    CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(incomplete_beta(0.5, 1.0, -2.0), domain_error);
    CHECK_THROWS_AS(incomplete_beta(1.5, 1.0, 1.0), domain_error);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    for (int n : {1, 2, 5, 16, 64, 128}) {
        const GaussLegendre gl(n);
        double wsum = 0.0;
        for (double w : gl.weights)
            wsum += w;
        CHECK_THAT(wsum, WithinAbs(2.0, 1e-13));
        const int deg = 2 * n - 1;
        CHECK_THAT(gl.integrate([deg](double x) { return std::pow(x, deg) + 1.0; }, 0.0, 1.0),
                   WithinRel(1.0 / (deg + 1) + 1.0, 1e-12));
    }
    const GaussLegendre gl(32);
    CHECK_THAT(gl.integrate([](double x) { return std::exp(x); }, 0.0, 2.0), WithinRel(std::exp(2.0) - 1.0, 1e-14));
    CHECK(gl.integrate([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}
