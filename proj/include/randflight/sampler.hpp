#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "randflight/core.hpp"
#include "randflight/dissipation.hpp"

namespace randflight {

struct FlightSample
{
    std::vector<double> position;
    int n_events = 0;
};

//! Position at time t of one flight started at the origin.
FlightSample simulate_flight(const FlightParams& params, const DissipationLaw& law, double t,
                             RandomStream& rng);

//! Which samples enter an estimate.
struct Conditioning
{
    std::optional<int> n_events;

    static Conditioning all() { return {}; }
    static Conditioning events(int n) { return {n}; }
};

/*!
 * Annular bins, optionally split into equal angular sectors (planar).
 * Sector j is centred on -pi + j * 2pi / n_sectors.
 */
struct BinLayout
{
    std::vector<double> r_edges;
    std::size_t n_sectors = 1;

    //! Edges at midpoints between grid nodes.
    static BinLayout from_grid(const LayerGrid& grid);
    static BinLayout equal_width(double r_max, std::size_t count, std::size_t n_sectors = 1);

    std::size_t n_rings() const { return r_edges.size() - 1; }
    std::size_t size() const { return n_rings() * n_sectors; }
    double volume(int dim, std::size_t ring) const;
    double ring_center(std::size_t ring) const;
    double sector_center(std::size_t sector) const;
};

struct DensityEstimate
{
    BinLayout bins;
    std::vector<std::uint64_t> counts;   //!< row-major (ring, sector)
    std::vector<double> values;          //!< counts / (normalizer * volume)
    std::vector<double> standard_errors;
    std::uint64_t n_samples = 0;         //!< flights simulated
    std::uint64_t n_used = 0;            //!< flights passing the conditioning
    std::uint64_t n_boundary = 0;        //!< used flights with no turns (on |x| = ct)
    std::vector<std::uint64_t> event_histogram;  //!< index = number of turns
    std::vector<double> mean_position;
    double max_radius_ratio = 0;         //!< max |X(t)| / (ct)
    Conditioning conditioning;

    double value(std::size_t ring, std::size_t sector = 0) const
    {
        return values[ring * bins.n_sectors + sector];
    }
    double standard_error(std::size_t ring, std::size_t sector = 0) const
    {
        return standard_errors[ring * bins.n_sectors + sector];
    }
    //! Fraction of used flights that made no turn.
    double boundary_fraction() const;
};

/*!
 * Histogram density estimate from n_samples flights.
 *
 * Flights are simulated in fixed blocks, each with its own stream derived
 * from (seed, block index), and integer counts are merged in block order,
 * so the result does not depend on the worker count.
 */
DensityEstimate estimate_density(const FlightParams& params, const DissipationLaw& law, double t,
                                 std::uint64_t n_samples, const BinLayout& bins,
                                 Conditioning conditioning, std::uint64_t seed,
                                 unsigned threads = 0);

DensityEstimate estimate_density(const FlightParams& params, const DissipationLaw& law, double t,
                                 std::uint64_t n_samples, const LayerGrid& grid,
                                 Conditioning conditioning, std::uint64_t seed,
                                 unsigned threads = 0);

//! Stream for block `block` of a run with the given seed.
RandomStream block_stream(std::uint64_t seed, std::uint64_t block);

} // namespace randflight
