#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "randflight/dissipation.hpp"
#include "randflight/specfun.hpp"

using namespace randflight;

TEST_CASE("uniform densities")
{
    const std::vector<double> e2 = {0, 1};
    const std::vector<double> e3 = {0, 0, 1};
    CHECK(chi_eval(DissipationLaw::uniform(2), e2) == doctest::Approx(1 / (2 * oracle::pi)));
    CHECK(chi_eval(DissipationLaw::uniform(3), e3) == doctest::Approx(1 / (4 * oracle::pi)));
    const std::vector<double> bad = {0, 1.01};
    CHECK_THROWS_AS(chi_eval(DissipationLaw::uniform(2), bad), std::domain_error);
}

TEST_CASE("circular Gaussian density")
{
    const auto law = DissipationLaw::circular_gaussian(1);
    const std::vector<double> e1 = {1, 0};
    // oracle: e / (2 pi I0(1)) with I0 from the raw series
    const double expect = std::exp(1.0) / (2 * oracle::pi * oracle::bessel_series(0, 1, true));
    CHECK(chi_eval(law, e1) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(chi_eval(law, e1) == doctest::Approx(0.341710).epsilon(1e-5));
    CHECK(law.chi_angle(0.4) == doctest::Approx(law.chi_angle(-0.4)));
    CHECK_THROWS_AS(DissipationLaw::circular_gaussian(10.5), std::domain_error);
    CHECK(DissipationLaw::circular_gaussian(0).is_symmetric());
    CHECK_FALSE(law.is_symmetric());
}

TEST_CASE("densities integrate to one")
{
    for (double k : {0.0, 0.5, 2.0, 10.0, -3.0})
    {
        const auto law = DissipationLaw::circular_gaussian(k);
        const int n = 512;
        double acc = 0;
        for (int j = 0; j < n; ++j)
            acc += law.chi_angle(-oracle::pi + 2 * oracle::pi * j / n);
        CHECK(std::abs(acc * 2 * oracle::pi / n - 1) < 1e-9);
    }
    // R^3: colatitude Simpson times longitude
    const auto law3 = DissipationLaw::uniform(3);
    auto f = [&](double phi) {
        const std::vector<double> u = {std::sin(phi), 0, std::cos(phi)};
        return law3.chi(u) * std::sin(phi) * 2 * oracle::pi;
    };
    CHECK(std::abs(oracle::simpson(f, 0, oracle::pi, 400) - 1) < 1e-9);
}

TEST_CASE("scaled sphere density")
{
    const FlightParams params(2, 2, 1);
    const auto gauss = DissipationLaw::circular_gaussian(1.5);
    const std::vector<double> x = {3, 0};
    CHECK(rho_eval(gauss, x, params, 1.5) == doctest::Approx(gauss.chi_angle(0)));
    const std::vector<double> off = {2.9, 0};
    CHECK_THROWS_AS(rho_eval(gauss, off, params, 1.5), std::domain_error);
    const auto flat = DissipationLaw::circular_gaussian(0);
    const std::vector<double> y = {0, -3};
    CHECK(rho_eval(flat, y, params, 1.5) == doctest::Approx(1 / (2 * oracle::pi)));
}

TEST_CASE("uniform sampler on the sphere")
{
    const auto law = DissipationLaw::uniform(3);
    RandomStream rng(11);
    const int n = 1000000;
    double mean[3] = {0, 0, 0};
    for (int s = 0; s < n; ++s)
    {
        const auto u = sample_direction(law, rng);
        CHECK_MESSAGE(std::abs(u[0] * u[0] + u[1] * u[1] + u[2] * u[2] - 1) < 1e-14, "unit");
        for (int d = 0; d < 3; ++d)
            mean[d] += u[d] / n;
    }
    const double sigma = 1 / std::sqrt(3.0) / 1000;
    for (double m : mean)
        CHECK(std::abs(m) < 4 * sigma);
}

TEST_CASE("circular Gaussian sampler mean")
{
    const auto law = DissipationLaw::circular_gaussian(2);
    RandomStream rng(5);
    const int n = 1000000;
    double sum = 0, sq = 0;
    std::vector<double> u(2);
    for (int s = 0; s < n; ++s)
    {
        law.sample(rng, u);
        sum += u[0];
        sq += u[0] * u[0];
    }
    // oracle: quadrature of cos(theta) chi_2(theta)
    auto f = [&](double th) { return std::cos(th) * law.chi_angle(th); };
    const double expect = oracle::simpson(f, -oracle::pi, oracle::pi, 2000);
    CHECK(expect == doctest::Approx(bessel_i1(2) / bessel_i0(2)).epsilon(1e-10));
    CHECK(expect == doctest::Approx(0.697775).epsilon(1e-6));
    const double mean = sum / n;
    const double sigma = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - expect) < 4 * sigma);
}

TEST_CASE("k = 0 sampler is uniform in angle")
{
    const auto law = DissipationLaw::circular_gaussian(0);
    RandomStream rng(99);
    const int n = 100000;
    std::vector<double> angles(n);
    std::vector<double> u(2);
    for (double& a : angles)
    {
        law.sample(rng, u);
        a = std::atan2(u[1], u[0]);
    }
    std::sort(angles.begin(), angles.end());
    double ks = 0;
    for (int i = 0; i < n; ++i)
    {
        const double cdf = (angles[i] + oracle::pi) / (2 * oracle::pi);
        ks = std::max({ks, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
    }
    // 1% critical value 1.628 / sqrt(n)
    CHECK(ks < 1.628 / std::sqrt(double(n)));
}

TEST_CASE("samplers are deterministic for a given stream")
{
    const auto law = DissipationLaw::circular_gaussian(3);
    RandomStream a(42), b(42);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_direction(law, a) == sample_direction(law, b));
}
