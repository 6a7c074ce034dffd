#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "transonic/numerics.hpp"

using namespace transonic;
using Catch::Approx;

TEST_CASE("trapezoid rules") {
    std::vector<double> f = {1.0, 1.0, 1.0, 1.0, 1.0};
    REQUIRE(trapezoid_uniform(f, 0.25) == Approx(1.0).margin(1e-15));
    auto cum = cumulative_trapezoid_uniform(f, 0.25);
    REQUIRE(cum.front() == 0.0);
    REQUIRE(cum.back() == Approx(1.0).margin(1e-15));

    std::vector<double> x = {0.0, 0.5, 2.0};
    std::vector<double> g = {0.0, 0.5, 2.0};
    REQUIRE(trapezoid(x, g) == Approx(2.0).margin(1e-15));  // integral of identity
}

TEST_CASE("gauss4 integrates degree-7 polynomials exactly") {
    auto f = [](double t) { return 8.0 * std::pow(t, 7) - 3.0 * t * t + 1.0; };
    REQUIRE(gauss4_unit(f) == Approx(1.0 - 1.0 + 1.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson") {
    const double v = adaptive_simpson([](double t) { return std::exp(t); }, 0.0, 1.0, 1e-12);
    REQUIRE(v == Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    REQUIRE(adaptive_simpson([](double t) { return t; }, 2.0, 2.0, 1e-12) == 0.0);
}

TEST_CASE("safeguarded newton finds sqrt(2)") {
    auto f = [](double x) { return x * x - 2.0; };
    auto df = [](double x) { return 2.0 * x; };
    const double r = safeguarded_newton(f, df, 1.0, 2.0, 1.5, 1e-14);
    REQUIRE(r == Approx(std::sqrt(2.0)).epsilon(1e-13));
    REQUIRE_THROWS_AS(safeguarded_newton(f, df, 2.0, 3.0, 2.5, 1e-14), std::invalid_argument);
}

TEST_CASE("bisection oracle") {
    auto f = [](double x) { return std::cos(x); };
    REQUIRE(bisect(f, 1.0, 2.0, 1e-13) == Approx(0.5 * M_PI).margin(1e-12));
}

TEST_CASE("monotone cubic reproduces linear data exactly") {
    std::vector<double> x = {0.0, 0.3, 0.7, 1.0};
    std::vector<double> f = {1.0, 1.6, 2.4, 3.0};  // 1 + 2x
    MonotoneCubic itp(x, f);
    for (double t : {0.0, 0.1, 0.5, 0.93, 1.0}) {
        REQUIRE(itp(t) == Approx(1.0 + 2.0 * t).epsilon(1e-14));
        REQUIRE(itp.derivative(t) == Approx(2.0).epsilon(1e-12));
    }
    // constant extension outside the table
    REQUIRE(itp(-1.0) == 1.0);
    REQUIRE(itp(2.0) == 3.0);
    REQUIRE(itp.derivative(2.0) == 0.0);
}

TEST_CASE("monotone cubic preserves monotonicity") {
    std::vector<double> x, f;
    for (int k = 0; k <= 10; ++k) {
        x.push_back(k / 10.0);
        f.push_back(std::tanh(3.0 * (x.back() - 0.5)));
    }
    MonotoneCubic itp(x, f);
    double prev = itp(0.0);
    for (int k = 1; k <= 1000; ++k) {
        const double v = itp(k / 1000.0);
        REQUIRE(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("hermite table evaluation is O(h^4)") {
    // f = sin on a uniform table with exact derivatives
    const int n = 33;
    std::vector<double> x(n), f(n), df(n);
    for (int k = 0; k < n; ++k) {
        x[k] = k / double(n - 1);
        f[k] = std::sin(3.0 * x[k]);
        df[k] = 3.0 * std::cos(3.0 * x[k]);
    }
    double emax = 0.0;
    for (int k = 0; k <= 500; ++k) {
        const double t = k / 500.0;
        emax = std::max(emax, std::abs(hermite_uniform(x, f, df, t) - std::sin(3.0 * t)));
    }
    REQUIRE(emax < 5e-7);  // (1/32)^4 * |f''''| scale
}
