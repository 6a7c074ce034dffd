#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "transonic/numerics.hpp"
#include "transonic/subsonic.hpp"

using namespace transonic;
using namespace transonic::subsonic;
using Catch::Approx;

namespace {

const thermo::GasModel gas{1.4, 1.0, 1.0};
const double B_bar = 2.625;
const double A_bar = 1.0 / 1.4;
const thermo::PrimitiveState bg_sub{0.5, 0.0, 1.0 / 1.4, 1.0};

// Independent oracle: bisection on the closure polynomial over the
// subsonic bracket, 1e-12 in rho.
double density_oracle(const Gradient& dphi, double B, double A) {
    const double g = gas.gamma;
    const double c0 = g * A / (g - 1.0);
    const double chi = (dphi.d_xi * dphi.d_xi + 1.0) / (2.0 * dphi.d_eta * dphi.d_eta);
    const double rho_sonic = std::pow(2.0 * B * (g - 1.0) / (g * A * (g + 1.0)), 1.0 / (g - 1.0));
    const double rho_max = std::pow(B * (g - 1.0) / (g * A), 1.0 / (g - 1.0));
    auto f = [&](double r) { return c0 * std::pow(r, g + 1.0) - B * r * r + chi; };
    return bisect(f, rho_sonic, rho_max, 1e-13, 300);
}

}  // namespace

TEST_CASE("density closure at the background gradient") {
    const double rho = density_from_stream_gradient({0.0, 2.0}, B_bar, A_bar, gas);
    REQUIRE(rho == Approx(1.0).margin(1e-12));
    // verify by substitution: 2.5 rho^2.4 - 2.625 rho^2 + 0.125 = 0
    REQUIRE(2.5 * std::pow(rho, 2.4) - 2.625 * rho * rho + 0.125 == Approx(0.0).margin(1e-12));
}

TEST_CASE("density closure matches the bisection oracle") {
    const Gradient dphi{0.0, 2.1};
    const double rho = density_from_stream_gradient(dphi, B_bar, A_bar, gas);
    REQUIRE(rho == Approx(density_oracle(dphi, B_bar, A_bar)).margin(1e-10));
    // frozen oracle value
    REQUIRE(rho == Approx(1.0150188733046988).margin(1e-9));

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dx(-0.05, 0.05), de(1.8, 2.2), dB(2.5, 2.8);
    for (int k = 0; k < 100; ++k) {
        const Gradient d{dx(rng), de(rng)};
        const double B = dB(rng);
        REQUIRE(density_from_stream_gradient(d, B, A_bar, gas) ==
                Approx(density_oracle(d, B, A_bar)).margin(1e-10));
    }
}

TEST_CASE("density closure reports sonic degeneracy with both chi values") {
    try {
        density_from_stream_gradient({0.0, 0.1}, B_bar, A_bar, gas);
        FAIL("expected sonic_error");
    } catch (const sonic_error& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("chi") != std::string::npos);
        REQUIRE(msg.find("critical") != std::string::npos);
    }
    REQUIRE_THROWS_AS(density_from_stream_gradient({0.0, -2.0}, B_bar, A_bar, gas),
                      std::domain_error);
}

TEST_CASE("accepted roots are strictly subsonic") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dx(-0.08, 0.08), de(1.7, 2.3);
    for (int k = 0; k < 100; ++k) {
        const Gradient d{dx(rng), de(rng)};
        const double rho = density_from_stream_gradient(d, B_bar, A_bar, gas);
        const double c2 = gas.gamma * A_bar * std::pow(rho, gas.gamma - 1.0);
        const double q2 = (d.d_xi * d.d_xi + 1.0) / (rho * rho * d.d_eta * d.d_eta);
        REQUIRE(c2 > q2);
    }
}

TEST_CASE("pressure closure") {
    REQUIRE(pressure_from_stream_gradient({0.0, 2.0}, B_bar, A_bar, gas) ==
            Approx(1.0 / 1.4).margin(1e-12));
    const Gradient d{0.0, 2.1};
    const double rho_star = density_oracle(d, B_bar, A_bar);
    REQUIRE(pressure_from_stream_gradient(d, B_bar, A_bar, gas) ==
            Approx(A_bar * std::pow(rho_star, gas.gamma)).margin(1e-10));
}

TEST_CASE("density and pressure increase with d_eta at d_xi = 0") {
    double prev_rho = 0.0, prev_p = 0.0;
    for (int k = 0; k <= 20; ++k) {
        const double de = 1.8 + 0.4 * k / 20.0;
        const double rho = density_oracle({0.0, de}, B_bar, A_bar);
        const double p = pressure_from_stream_gradient({0.0, de}, B_bar, A_bar, gas);
        if (k > 0) {
            REQUIRE(rho > prev_rho);
            REQUIRE(p > prev_p);
        }
        prev_rho = rho;
        prev_p = p;
    }
}

TEST_CASE("flux functions") {
    const auto [n1_bg, n2_bg] = flux_functions({0.0, 2.0}, B_bar, A_bar, gas);
    REQUIRE(n1_bg == Approx(0.0).margin(1e-14));
    REQUIRE(n2_bg == Approx(1.0 / 1.4).margin(1e-12));

    const Gradient d{0.01, 2.0};
    const double rho_star = density_oracle(d, B_bar, A_bar);
    const auto [n1, n2] = flux_functions(d, B_bar, A_bar, gas);
    REQUIRE(n1 == Approx(0.01 / (2.0 * rho_star)).margin(1e-10));
    (void)n2;

    // antisymmetry of N1 in d_xi (chi is even in d_xi)
    const auto [n1m, n2m] = flux_functions({-0.01, 2.0}, B_bar, A_bar, gas);
    REQUIRE(n1m == Approx(-n1).margin(1e-14));
    REQUIRE(n2m == Approx(n2).margin(1e-14));
}

TEST_CASE("analytic partials agree with finite differences") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dx(-0.05, 0.05), de(1.85, 2.15);
    const double h = 1e-6;
    for (int k = 0; k < 50; ++k) {
        const Gradient d{dx(rng), de(rng)};
        const auto fp = flux_partials(d, B_bar, A_bar, gas);
        auto n = [&](double a, double b) { return flux_functions({a, b}, B_bar, A_bar, gas); };
        const auto [n1p, n2p] = n(d.d_xi + h, d.d_eta);
        const auto [n1m, n2m] = n(d.d_xi - h, d.d_eta);
        const auto [n1u, n2u] = n(d.d_xi, d.d_eta + h);
        const auto [n1d, n2d] = n(d.d_xi, d.d_eta - h);
        REQUIRE(fp.a11 == Approx((n1p - n1m) / (2 * h)).margin(2e-7));
        REQUIRE(fp.a21 == Approx((n2p - n2m) / (2 * h)).margin(2e-7));
        REQUIRE(fp.a12 == Approx((n1u - n1d) / (2 * h)).margin(2e-7));
        REQUIRE(fp.a22 == Approx((n2u - n2d) / (2 * h)).margin(2e-7));
    }
}

TEST_CASE("path coefficients at the zero iterate match the background constants") {
    const Gradient base{0.0, 2.0};
    const auto a = path_flux_coefficients(base, {0.0, 0.0}, B_bar, A_bar, gas);
    REQUIRE(a.a11 == Approx(0.5).margin(1e-12));
    REQUIRE(a.a22 == Approx(1.0 / 6.0).margin(1e-12));
    REQUIRE(a.a12 == Approx(0.0).margin(1e-14));
    REQUIRE(a.a21 == Approx(0.0).margin(1e-14));
    REQUIRE(a.a11 * a.a22 - a.a12 * a.a21 == Approx(1.0 / 12.0).margin(1e-12));

    REQUIRE(background_e1(bg_sub) == 0.5);
    REQUIRE(background_beta02(bg_sub, gas) == Approx(1.0 / 6.0).margin(1e-14));
    const auto beta = path_pressure_coefficients(base, {0.0, 0.0}, B_bar, A_bar, gas);
    REQUIRE(beta.d_xi == Approx(0.0).margin(1e-14));
    REQUIRE(beta.d_eta == Approx(1.0 / 6.0).margin(1e-12));
}

TEST_CASE("path coefficients deviate linearly in the iterate") {
    const Gradient base{0.0, 2.0};
    const auto a0 = path_flux_coefficients(base, {0.0, 0.0}, B_bar, A_bar, gas);
    double prev = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const double scale = 1e-3 * k;
        const Gradient delta{0.37 * scale, -0.61 * scale};
        const auto a = path_flux_coefficients(base, delta, B_bar, A_bar, gas);
        const double dev = std::max({std::abs(a.a11 - a0.a11), std::abs(a.a12 - a0.a12),
                                     std::abs(a.a21 - a0.a21), std::abs(a.a22 - a0.a22)});
        if (k > 1) {
            // deviation grows linearly with the iterate: ratio ~ k/(k-1)
            const double ratio = dev / prev;
            REQUIRE(ratio == Approx(double(k) / (k - 1)).epsilon(0.05));
        }
        prev = dev;
    }
}
