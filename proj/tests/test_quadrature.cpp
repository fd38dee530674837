#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include <subwave/quadrature.hpp>

using namespace subwave;

TEST_CASE("oscillatory Lorentzian integral matches reference") {
    // int_{-10}^{10} cos(40 x) / (1 + x^2) dx
    const double ref = -0.00041994450458092496;
    QuadSpec spec;
    spec.rel_tol = 1e-10;
    spec.abs_tol = 1e-14;
    const QuadResult r =
        integrate_1d([](double x) { return std::cos(40.0 * x) / (1.0 + x * x); }, -10.0, 10.0,
                     spec);
    REQUIRE(std::abs(r.value.real() - ref) < 1e-12);
    REQUIRE(std::abs(r.value.imag()) < 1e-15);
    REQUIRE(r.error_estimate >= 0.0);
    REQUIRE(r.subdivisions_used > 0);
}

TEST_CASE("sine integral with removable singularity") {
    // Si(3) = int_0^3 sin(x)/x dx
    const double ref = 1.8486525279994683;
    const QuadResult r = integrate_1d(
        [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }, 0.0, 3.0, QuadSpec{});
    REQUIRE(std::abs(r.value.real() - ref) < 1e-10);
}

TEST_CASE("complex-valued integrand integrates both parts") {
    // int_0^1 exp(i pi x) dx = (exp(i pi) - 1)/(i pi) = 2i/pi
    const QuadResult r = integrate_1d(
        [](double x) { return std::polar(1.0, std::numbers::pi * x); }, 0.0, 1.0, QuadSpec{});
    REQUIRE(std::abs(r.value.real()) < 1e-12);
    REQUIRE(std::abs(r.value.imag() - 2.0 / std::numbers::pi) < 1e-12);
}

TEST_CASE("breakpoint seeding splits exactly at the given points") {
    // kink at x = 0.3: |x - 0.3| integrates to a known value
    const double ref = 0.5 * (0.3 * 0.3 + 0.7 * 0.7);
    const QuadResult r = integrate_1d([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0,
                                      QuadSpec{}, {0.3});
    REQUIRE(std::abs(r.value.real() - ref) < 1e-14);
}

TEST_CASE("two-dimensional Gaussian with angular coupling") {
    // iint_{[-6,6]^2} exp(-x^2-y^2) cos(xy) dx dy = 2 pi / sqrt(5)
    const double ref = 2.8099258924162906;
    QuadSpec spec;
    spec.rel_tol = 1e-9;
    const QuadResult r = integrate_2d(
        [](double x, double y) { return std::exp(-x * x - y * y) * std::cos(x * y); },
        Rectangle{-6.0, 6.0, -6.0, 6.0}, spec);
    REQUIRE(std::abs(r.value.real() - ref) < 1e-8);
}

TEST_CASE("invalid intervals and breakpoints are rejected") {
    auto one = [](double) { return 1.0; };
    REQUIRE_THROWS_AS(integrate_1d(one, 1.0, 1.0, QuadSpec{}), InvalidInterval);
    REQUIRE_THROWS_AS(integrate_1d(one, 2.0, 1.0, QuadSpec{}), InvalidInterval);
    REQUIRE_THROWS_AS(integrate_1d(one, 0.0, 1.0, QuadSpec{}, {0.8, 0.2}), InvalidInterval);
    REQUIRE_THROWS_AS(integrate_1d(one, 0.0, 1.0, QuadSpec{}, {1.5}), InvalidInterval);
    REQUIRE_THROWS_AS(integrate_2d([](double, double) { return 1.0; },
                                   Rectangle{0.0, 1.0, 1.0, 1.0}, QuadSpec{}),
                      InvalidInterval);
}

TEST_CASE("non-finite integrand values are reported, not propagated") {
    REQUIRE_THROWS_AS(integrate_1d([](double x) { return 1.0 / x; }, -1.0, 1.0, QuadSpec{}),
                      NonFiniteIntegrand);
}

TEST_CASE("subdivision budget exhaustion throws NonConvergent") {
    QuadSpec spec;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 0.0;
    spec.max_subdivisions = 2;
    REQUIRE_THROWS_AS(
        integrate_1d([](double x) { return std::cos(40.0 * x) / (1.0 + x * x); }, -10.0, 10.0,
                     spec),
        NonConvergent);
}

TEST_CASE("invalid tolerance specs are rejected") {
    QuadSpec spec;
    spec.rel_tol = 0.0;
    auto one = [](double) { return 1.0; };
    REQUIRE_THROWS_AS(integrate_1d(one, 0.0, 1.0, spec), ConfigError);
    spec = QuadSpec{};
    spec.max_subdivisions = 0;
    REQUIRE_THROWS_AS(integrate_1d(one, 0.0, 1.0, spec), ConfigError);
}

TEST_CASE("frequency-domain truncation covers gain band plus guard") {
    CrystalParams p;
    p.g = 1.84;
    p.delta0 = 0.0;
    p.omega0 = 1.0;
    QuadSpec spec;
    spec.tail_cut = 50.0;
    const auto [lo, hi] = truncate_omega_domain(p, spec);
    REQUIRE(lo == -hi);
    REQUIRE(hi == Catch::Approx(std::sqrt(2.0 * 1.84 * 50.0 + 50.0)).epsilon(1e-15));

    // positive detuning narrows the needed band, never below the flat guard
    p.delta0 = 400.0;
    const auto [lo2, hi2] = truncate_omega_domain(p, spec);
    REQUIRE(hi2 == Catch::Approx(std::sqrt(50.0)).epsilon(1e-15));
    REQUIRE(lo2 == -hi2);

    // omega0 scales the physical cut linearly
    p.delta0 = 0.0;
    p.omega0 = 2.5;
    const auto [lo3, hi3] = truncate_omega_domain(p, spec);
    REQUIRE(hi3 == Catch::Approx(2.5 * std::sqrt(234.0)).epsilon(1e-15));
    REQUIRE(lo3 == -hi3);
}
