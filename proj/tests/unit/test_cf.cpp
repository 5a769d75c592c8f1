#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "randflight/cf.hpp"
#include "randflight/convolution.hpp"

using namespace randflight;

TEST_CASE("sphere characteristic functions")
{
    const FlightParams p2(2, 1, 1);
    const FlightParams p3(3, 1, 1);
    const std::vector<double> zero2 = {0, 0};
    const std::vector<double> j0_zero = {2.404825557695773, 0};
    const std::vector<double> sinc_zero = {0, 0, oracle::pi};
    const auto u2 = DissipationLaw::uniform(2);
    const auto u3 = DissipationLaw::uniform(3);
    CHECK(std::abs(psi(p2, u2, zero2, 1) - 1.0) < 1e-15);
    CHECK(std::abs(psi(p2, u2, j0_zero, 1)) < 1e-6);
    CHECK(std::abs(psi(p3, u3, sinc_zero, 1)) < 1e-8);
    CHECK(psi(p2, u2, j0_zero, 0) == Complex(1, 0));

    const std::vector<double> a2 = {0.7, -1.1};
    CHECK(std::abs(psi(p2, u2, a2, 1.3) - psi_quadrature(p2, u2, a2, 1.3)) < 1e-10);
    CHECK(std::abs(psi(p2, u2, a2, 1.3).real()
                   - oracle::bessel_series(0, 1.3 * std::hypot(0.7, 1.1), false)) < 1e-12);
    const std::vector<double> a3 = {0.7, -1.1, 0.2};
    CHECK(std::abs(psi(p3, u3, a3, 1.3) - psi_quadrature(p3, u3, a3, 1.3)) < 1e-10);

    const FlightParams p5(5, 1, 1);
    const std::vector<double> a5 = {1, 0.5, 0, 0, 2};
    CHECK(std::abs(psi(p5, DissipationLaw::uniform(5), a5, 1)
                   - psi_quadrature(p5, DissipationLaw::uniform(5), a5, 1)) < 1e-10);
    // m = 4: 2 J_1(x)/x
    CHECK(plane_wave_average(4, 2.0) == doctest::Approx(oracle::bessel_series(1, 2, false)).epsilon(1e-12));

    CHECK_THROWS_AS(psi(p2, u2, a3, 1), std::domain_error);
}

TEST_CASE("circular Gaussian characteristic function")
{
    const FlightParams p(2, 1, 1);
    const auto law = DissipationLaw::circular_gaussian(1);
    const std::vector<double> along1 = {1.5, 0};
    const std::vector<double> along2 = {0, 1.5};
    const Complex a = psi(p, law, along1, 1);
    const Complex b = psi(p, law, along2, 1);
    CHECK(std::abs(a.imag()) > 0.1);
    CHECK(std::abs(b.imag()) < 1e-14);
    // oracle: Simpson of e^{i 1.5 cos th} chi(th)
    auto re = [&](double th) { return std::cos(1.5 * std::cos(th)) * law.chi_angle(th); };
    auto im = [&](double th) { return std::sin(1.5 * std::cos(th)) * law.chi_angle(th); };
    CHECK(a.real() == doctest::Approx(oracle::simpson(re, -oracle::pi, oracle::pi, 2000)).epsilon(1e-10));
    CHECK(a.imag() == doctest::Approx(oracle::simpson(im, -oracle::pi, oracle::pi, 2000)).epsilon(1e-10));
}

TEST_CASE("ladders at zero frequency are t^n / n!")
{
    const FlightParams p(2, 1, 1);
    const std::vector<double> zero = {0, 0};
    const auto ladders = jn_ladders(p, DissipationLaw::uniform(2), zero, 2, 2000, 8);
    REQUIRE(ladders.size() == 9);
    double fact = 1;
    for (int n = 0; n <= 8; ++n)
    {
        if (n > 0)
            fact *= n;
        const double expect = std::pow(2.0, n) / fact;
        // trapezoid error is O(h^2) with h = 1e-3
        CHECK(std::abs(ladders[n].values.back() - expect) < 1e-6);
    }
    // full series sums to one
    const Complex total = cf_series(p, ladders, 2000);
    CHECK(std::abs(total - (1 - tail_mass(8, p, 2))) < 1e-6);
}

TEST_CASE("first convolution against a nested quadrature")
{
    const FlightParams p(2, 1, 1);
    const std::vector<double> alpha = {1.2, 0.5};
    const double a = std::hypot(1.2, 0.5);
    const auto law = DissipationLaw::uniform(2);
    const auto ladders = jn_ladders(p, law, alpha, 3, 3000, 1);
    for (std::size_t j : {500u, 1500u, 3000u})
    {
        const double t = ladders[1].time(j);
        auto f = [&](double tau) {
            return oracle::bessel_series(0, a * (t - tau), false) * oracle::bessel_series(0, a * tau, false);
        };
        CHECK(std::abs(ladders[1].values[j].real() - oracle::simpson(f, 0, t, 2000)) < 1e-6);
    }
    CHECK_THROWS_AS(jn_next(ladders[0], jn_ladders(p, law, alpha, 3, 1000, 0)[0]), std::invalid_argument);
}

TEST_CASE("renewal solution matches the series")
{
    for (int m : {2, 3})
    {
        const FlightParams p(m, 1, 1);
        const auto law = DissipationLaw::uniform(m);
        std::vector<double> alpha(m, 0.0);
        alpha[0] = 1.7;
        const std::size_t steps = 4096;
        const double t_max = 4;
        const auto g = volterra_solve(p, law, alpha, t_max, steps);
        const auto ladders = jn_ladders(p, law, alpha, t_max, steps, 12);
        for (std::size_t j = 512; j <= steps; j += 512)
        {
            const double bound = 1e-6 + tail_mass(12, p, g.time(j));
            CHECK(std::abs(g.values[j] - cf_series(p, ladders, j)) <= bound);
        }
    }
    const FlightParams p(2, 1, 2);
    const std::vector<double> zero = {0, 0};
    const auto one = volterra_solve(p, DissipationLaw::circular_gaussian(1), zero, 10, 512);
    for (const Complex& v : one.values)
        CHECK(std::abs(v - 1.0) < 1e-13);
    CHECK_THROWS_AS(volterra_solve(p, DissipationLaw::uniform(2), zero, 1, 32), std::domain_error);
}

TEST_CASE("Laplace transform identity")
{
    const FlightParams p(2, 1, 1);
    const std::vector<double> zero = {0, 0};
    const std::vector<double> s = {0.5, 1, 2};
    const auto rep = laplace_report(p, DissipationLaw::uniform(2), zero, s);
    for (const auto& pt : rep.points)
        CHECK(pt.transform == doctest::Approx(1 / pt.s).epsilon(1e-6));

    const std::vector<double> alpha = {0.6, 0.8};
    const auto uni = laplace_report(p, DissipationLaw::uniform(2), alpha, s);
    CHECK(uni.max_relative_error < 1e-4);
    for (const auto& pt : uni.points)
        CHECK(pt.predicted == doctest::Approx(pt.closed_form).epsilon(1e-8));

    const FlightParams p3(3, 1, 1);
    const std::vector<double> a3 = {0, 2, 0};
    CHECK(laplace_check(p3, DissipationLaw::uniform(3), a3, s) < 1e-4);

    CHECK_THROWS_AS(laplace_report(p, DissipationLaw::uniform(2), alpha, s, 5, 1024), NumericError);
}

TEST_CASE("Fourier transform of grid layers")
{
    for (int m : {2, 3})
    {
        const FlightParams p(m, 1, 1);
        const auto law = DissipationLaw::uniform(m);
        const auto grid = RadialGrid::clustered(p, 1, 64);
        const auto f1 = seed_layer_1(p, law, 1, grid);
        std::vector<double> alpha(m, 0.0);
        CHECK(fourier_of_layer(f1, alpha).real() == doctest::Approx(f1.mass()).epsilon(1e-12));
        alpha[0] = 2.0;
        const auto ladders = jn_ladders(p, law, alpha, 1, 4000, 1);
        const Complex expect = std::exp(-1.0) * ladders[1].values.back();
        CHECK(std::abs(fourier_of_layer(f1, alpha) - expect) < 1e-3 * std::abs(expect) + 1e-6);
    }
}
