#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "randflight/sampler.hpp"

using namespace randflight;

TEST_CASE("single flights")
{
    // a negligible rate leaves a straight ray
    const FlightParams slow(3, 2, 1e-9);
    RandomStream rng(1);
    const auto s = simulate_flight(slow, DissipationLaw::uniform(3), 1.5, rng);
    CHECK(s.n_events == 0);
    double sq = 0;
    for (double v : s.position)
        sq += v * v;
    CHECK(std::sqrt(sq) == doctest::Approx(3.0).epsilon(1e-14));

    const FlightParams p(2, 1, 4);
    for (int i = 0; i < 1000; ++i)
    {
        const auto f = simulate_flight(p, DissipationLaw::circular_gaussian(1), 1, rng);
        const double r = std::hypot(f.position[0], f.position[1]);
        CHECK_MESSAGE(r <= 1 + 1e-12, "inside the ball");
        if (f.n_events == 0)
            CHECK(r == doctest::Approx(1));
    }
    CHECK_THROWS_AS(simulate_flight(p, DissipationLaw::uniform(3), 1, rng), std::domain_error);
}

TEST_CASE("bin layouts")
{
    const auto eq = BinLayout::equal_width(2, 4, 8);
    CHECK(eq.n_rings() == 4);
    CHECK(eq.size() == 32);
    CHECK(eq.ring_center(0) == 0.25);
    CHECK(eq.volume(2, 0) == doctest::Approx(oracle::pi * 0.25 / 8));
    CHECK(eq.sector_center(0) == doctest::Approx(-oracle::pi));
    CHECK(eq.sector_center(4) == doctest::Approx(0));

    const FlightParams p(2, 1, 1);
    const LayerGrid grid = RadialGrid(p, 1, {0.2, 0.4, 0.6}, 1e-3);
    const auto mid = BinLayout::from_grid(grid);
    const std::vector<double> edges = {0.1, 0.3, 0.5, 0.7};
    REQUIRE(mid.r_edges.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(mid.r_edges[i] == doctest::Approx(edges[i]));
    CHECK_THROWS_AS(BinLayout::equal_width(1, 0), std::domain_error);
}

TEST_CASE("zero-turn fraction")
{
    for (double lt : {0.5, 1.0, 2.0})
    {
        const FlightParams p(2, 1, lt);
        const auto est = estimate_density(p, DissipationLaw::uniform(2), 1, 200000,
                                          BinLayout::equal_width(1, 10), Conditioning::all(), 7);
        const double q = std::exp(-lt);
        CHECK(std::abs(est.boundary_fraction() - q) < 4 * std::sqrt(q * (1 - q) / 200000));
        CHECK(est.max_radius_ratio <= 1 + 1e-12);
    }
}

TEST_CASE("absolutely continuous mass and event histogram")
{
    const FlightParams p(3, 1, 1.3);
    const auto bins = BinLayout::equal_width(1.0, 20);
    const auto est = estimate_density(p, DissipationLaw::uniform(3), 1, 200000, bins,
                                      Conditioning::all(), 11);
    double mass = 0;
    for (std::size_t i = 0; i < bins.n_rings(); ++i)
        mass += est.value(i) * bins.volume(3, i);
    CHECK(mass + est.boundary_fraction() == doctest::Approx(1).epsilon(1e-12));
    std::uint64_t total = 0;
    for (auto h : est.event_histogram)
        total += h;
    CHECK(total == 200000);
    const double p1 = oracle::poisson_pmf(1, 1.3);
    CHECK(std::abs(double(est.event_histogram[1]) / 200000 - p1) < 4 * std::sqrt(p1 * (1 - p1) / 200000));
}

TEST_CASE("conditional one-turn density")
{
    const FlightParams p(2, 1, 1);
    BinLayout bins;
    bins.r_edges = {0.475, 0.525};
    const auto est = estimate_density(p, DissipationLaw::uniform(2), 1, 1000000, bins,
                                      Conditioning::events(1), 21);
    CHECK(est.n_boundary == 0);
    const double expect = 1 / (2 * oracle::pi * std::sqrt(0.75));
    CHECK(std::abs(est.value(0) - expect) < 4 * est.standard_error(0));

    const auto none = estimate_density(p, DissipationLaw::uniform(2), 1, 20000,
                                       BinLayout::equal_width(1, 4), Conditioning::events(0), 2);
    CHECK(none.boundary_fraction() == 1);
    for (double v : none.values)
        CHECK(v == 0);

    CHECK_THROWS_AS(estimate_density(p, DissipationLaw::uniform(2), 1, 10000,
                                     BinLayout::equal_width(1, 4), Conditioning::events(60), 2),
                    NumericError);
    CHECK_THROWS_AS(estimate_density(p, DissipationLaw::uniform(2), 1, 999,
                                     BinLayout::equal_width(1, 4), Conditioning::all(), 2),
                    std::domain_error);
}

TEST_CASE("standard errors shrink as one over root n")
{
    const FlightParams p(2, 1, 1);
    const auto bins = BinLayout::equal_width(1, 8);
    const auto law = DissipationLaw::uniform(2);
    const auto small = estimate_density(p, law, 1, 100000, bins, Conditioning::all(), 3);
    const auto large = estimate_density(p, law, 1, 400000, bins, Conditioning::all(), 4);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(large.standard_error(i) / small.standard_error(i) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("uniform flights have no drift, Gaussian flights drift along x1")
{
    const FlightParams p(2, 1, 1);
    const auto bins = BinLayout::equal_width(1, 4, 8);
    const std::uint64_t n = 200000;
    const auto uni = estimate_density(p, DissipationLaw::uniform(2), 1, n, bins, Conditioning::all(), 8);
    const double sigma = 1 / std::sqrt(double(n));
    CHECK(std::abs(uni.mean_position[0]) < 4 * sigma);
    CHECK(std::abs(uni.mean_position[1]) < 4 * sigma);

    // sectors of each ring agree with the ring mean within 5 pooled SE
    for (std::size_t ring = 0; ring < 4; ++ring)
    {
        double mean = 0, pooled = 0;
        for (std::size_t j = 0; j < 8; ++j)
        {
            mean += uni.value(ring, j) / 8;
            pooled += uni.standard_error(ring, j) * uni.standard_error(ring, j) / 8;
        }
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(std::abs(uni.value(ring, j) - mean) <= 5 * std::sqrt(pooled));
    }

    const auto gau = estimate_density(p, DissipationLaw::circular_gaussian(1), 1, n, bins,
                                      Conditioning::all(), 8);
    CHECK(gau.mean_position[0] > 0.1);
    CHECK(std::abs(gau.mean_position[1]) < 4 * sigma);
    // sector 4 is centred on theta = 0
    CHECK(gau.value(2, 4) > gau.value(2, 0));
}

TEST_CASE("estimates do not depend on the worker count")
{
    const FlightParams p(2, 1, 1);
    const auto bins = BinLayout::equal_width(1, 16, 4);
    const auto law = DissipationLaw::circular_gaussian(0.5);
    const auto one = estimate_density(p, law, 1, 100000, bins, Conditioning::all(), 99, 1);
    const auto three = estimate_density(p, law, 1, 100000, bins, Conditioning::all(), 99, 3);
    CHECK(one.counts == three.counts);
    CHECK(one.values == three.values);
    CHECK(one.mean_position == three.mean_position);
    const auto other = estimate_density(p, law, 1, 100000, bins, Conditioning::all(), 100, 1);
    CHECK(one.counts != other.counts);
}
