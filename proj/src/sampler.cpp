#include "randflight/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace randflight {

namespace {

constexpr std::uint64_t block_size = 1u << 15;

// Simulate one flight into pos; times and dir are scratch buffers.
int simulate_into(const FlightParams& params, const DissipationLaw& law, double t,
                  RandomStream& rng, std::span<double> pos, std::vector<double>& times,
                  std::span<double> dir)
{
    std::poisson_distribution<int> count(params.rate() * t);
    std::uniform_real_distribution<double> unit;
    const int n = count(rng);
    times.resize(static_cast<std::size_t>(n));
    for (double& s : times)
        s = t * unit(rng);
    std::sort(times.begin(), times.end());
    std::fill(pos.begin(), pos.end(), 0.0);
    double last = 0;
    for (int k = 0; k <= n; ++k)
    {
        const double next = k < n ? times[static_cast<std::size_t>(k)] : t;
        law.sample(rng, dir);
        const double step = params.speed() * (next - last);
        for (std::size_t d = 0; d < pos.size(); ++d)
            pos[d] += step * dir[d];
        last = next;
    }
    return n;
}

struct BlockResult
{
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> events;
    std::vector<double> position_sum;
    std::uint64_t used = 0;
    std::uint64_t boundary = 0;
    double max_ratio = 0;
};

} // namespace

FlightSample simulate_flight(const FlightParams& params, const DissipationLaw& law, double t,
                             RandomStream& rng)
{
    if (!(t > 0))
        throw std::domain_error("simulate_flight: time must be positive");
    if (law.dim() != params.dim())
        throw std::domain_error("simulate_flight: law and flight dimensions differ");
    FlightSample sample;
    sample.position.resize(static_cast<std::size_t>(params.dim()));
    std::vector<double> times;
    std::vector<double> dir(static_cast<std::size_t>(params.dim()));
    sample.n_events = simulate_into(params, law, t, rng, sample.position, times, dir);
    return sample;
}

RandomStream block_stream(std::uint64_t seed, std::uint64_t block)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                      0x5eedu};
    return RandomStream(seq);
}

//---------------------------------------------------------------------------//

BinLayout BinLayout::from_grid(const LayerGrid& grid)
{
    const RadialGrid& radial = radial_part(grid);
    const auto& nodes = radial.nodes();
    if (nodes.size() < 2)
        throw std::domain_error("BinLayout: need at least two grid nodes");
    BinLayout bins;
    bins.n_sectors = angular_size(grid);
    bins.r_edges.push_back(std::max(0.0, nodes[0] - 0.5 * (nodes[1] - nodes[0])));
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        bins.r_edges.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    const std::size_t last = nodes.size() - 1;
    bins.r_edges.push_back(std::min(radial.outer_radius(),
                                    nodes[last] + 0.5 * (nodes[last] - nodes[last - 1])));
    return bins;
}

BinLayout BinLayout::equal_width(double r_max, std::size_t count, std::size_t n_sectors)
{
    if (!(r_max > 0) || count == 0 || n_sectors == 0)
        throw std::domain_error("BinLayout: bad layout");
    BinLayout bins;
    bins.n_sectors = n_sectors;
    for (std::size_t i = 0; i <= count; ++i)
        bins.r_edges.push_back(r_max * static_cast<double>(i) / static_cast<double>(count));
    return bins;
}

double BinLayout::volume(int dim, std::size_t ring) const
{
    const double lo = r_edges[ring];
    const double hi = r_edges[ring + 1];
    return (ball_volume(dim, hi) - ball_volume(dim, lo)) / static_cast<double>(n_sectors);
}

double BinLayout::ring_center(std::size_t ring) const
{
    return 0.5 * (r_edges[ring] + r_edges[ring + 1]);
}

double BinLayout::sector_center(std::size_t sector) const
{
    return -std::numbers::pi
           + 2 * std::numbers::pi * static_cast<double>(sector) / static_cast<double>(n_sectors);
}

double DensityEstimate::boundary_fraction() const
{
    return n_used == 0 ? 0.0 : static_cast<double>(n_boundary) / static_cast<double>(n_used);
}

//---------------------------------------------------------------------------//

DensityEstimate estimate_density(const FlightParams& params, const DissipationLaw& law, double t,
                                 std::uint64_t n_samples, const BinLayout& bins,
                                 Conditioning conditioning, std::uint64_t seed, unsigned threads)
{
    if (!(t > 0))
        throw std::domain_error("estimate_density: time must be positive");
    if (n_samples < 10000)
        throw std::domain_error("estimate_density: need at least 10^4 samples");
    if (law.dim() != params.dim())
        throw std::domain_error("estimate_density: law and flight dimensions differ");
    if (bins.r_edges.size() < 2 || bins.n_sectors == 0)
        throw std::domain_error("estimate_density: empty bin layout");
    for (std::size_t i = 1; i < bins.r_edges.size(); ++i)
        if (!(bins.r_edges[i] > bins.r_edges[i - 1]) || bins.r_edges[0] < 0)
            throw std::domain_error("estimate_density: bin edges must increase from >= 0");
    if (bins.n_sectors > 1 && params.dim() != 2)
        throw std::domain_error("estimate_density: angular sectors are planar only");
    if (conditioning.n_events && *conditioning.n_events < 0)
        throw std::domain_error("estimate_density: negative event count");

    const int m = params.dim();
    const std::size_t dim = static_cast<std::size_t>(m);
    const double reach = params.radius(t);
    const double sector_width = 2 * std::numbers::pi / static_cast<double>(bins.n_sectors);
    const std::uint64_t n_blocks = (n_samples + block_size - 1) / block_size;
    std::vector<BlockResult> results(n_blocks);

    parallel_for(n_blocks, threads, [&](std::size_t b) {
        RandomStream rng = block_stream(seed, b);
        BlockResult& out = results[b];
        out.counts.assign(bins.size(), 0);
        out.position_sum.assign(dim, 0.0);
        std::vector<double> pos(dim);
        std::vector<double> dir(dim);
        std::vector<double> times;
        const std::uint64_t begin = b * block_size;
        const std::uint64_t end = std::min(n_samples, begin + block_size);
        for (std::uint64_t s = begin; s < end; ++s)
        {
            const int n = simulate_into(params, law, t, rng, pos, times, dir);
            if (out.events.size() <= static_cast<std::size_t>(n))
                out.events.resize(static_cast<std::size_t>(n) + 1, 0);
            ++out.events[static_cast<std::size_t>(n)];
            double sq = 0;
            for (std::size_t d = 0; d < dim; ++d)
                sq += pos[d] * pos[d];
            const double r = std::sqrt(sq);
            out.max_ratio = std::max(out.max_ratio, r / reach);
            if (conditioning.n_events && n != *conditioning.n_events)
                continue;
            ++out.used;
            for (std::size_t d = 0; d < dim; ++d)
                out.position_sum[d] += pos[d];
            if (n == 0)
            {
                ++out.boundary;
                continue;
            }
            if (r < bins.r_edges.front() || r >= bins.r_edges.back())
                continue;
            const auto ring = static_cast<std::size_t>(
                std::upper_bound(bins.r_edges.begin(), bins.r_edges.end(), r)
                - bins.r_edges.begin() - 1);
            std::size_t sector = 0;
            if (bins.n_sectors > 1)
            {
                const double theta = std::atan2(pos[1], pos[0]);
                const auto k = static_cast<long>(
                    std::floor((theta + std::numbers::pi) / sector_width + 0.5));
                sector = static_cast<std::size_t>(k % static_cast<long>(bins.n_sectors));
            }
            ++out.counts[ring * bins.n_sectors + sector];
        }
    });

    DensityEstimate est;
    est.bins = bins;
    est.conditioning = conditioning;
    est.n_samples = n_samples;
    est.counts.assign(bins.size(), 0);
    est.mean_position.assign(dim, 0.0);
    for (const BlockResult& res : results)
    {
        for (std::size_t k = 0; k < bins.size(); ++k)
            est.counts[k] += res.counts[k];
        if (est.event_histogram.size() < res.events.size())
            est.event_histogram.resize(res.events.size(), 0);
        for (std::size_t k = 0; k < res.events.size(); ++k)
            est.event_histogram[k] += res.events[k];
        for (std::size_t d = 0; d < dim; ++d)
            est.mean_position[d] += res.position_sum[d];
        est.n_used += res.used;
        est.n_boundary += res.boundary;
        est.max_radius_ratio = std::max(est.max_radius_ratio, res.max_ratio);
    }
    if (est.n_used == 0)
        throw NumericError("estimate_density: no samples with " + std::to_string(*conditioning.n_events)
                           + " events among " + std::to_string(n_samples));
    for (double& v : est.mean_position)
        v /= static_cast<double>(est.n_used);

    const double norm = static_cast<double>(est.n_used);
    est.values.resize(bins.size());
    est.standard_errors.resize(bins.size());
    for (std::size_t ring = 0; ring < bins.n_rings(); ++ring)
    {
        const double vol = bins.volume(m, ring);
        for (std::size_t j = 0; j < bins.n_sectors; ++j)
        {
            const std::size_t k = ring * bins.n_sectors + j;
            const double count = static_cast<double>(est.counts[k]);
            est.values[k] = count / (norm * vol);
            est.standard_errors[k] = std::sqrt(count * (1 - count / norm)) / (norm * vol);
        }
    }
    return est;
}

DensityEstimate estimate_density(const FlightParams& params, const DissipationLaw& law, double t,
                                 std::uint64_t n_samples, const LayerGrid& grid,
                                 Conditioning conditioning, std::uint64_t seed, unsigned threads)
{
    return estimate_density(params, law, t, n_samples, BinLayout::from_grid(grid), conditioning,
                            seed, threads);
}

} // namespace randflight
