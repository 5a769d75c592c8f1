#include "randflight/dissipation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "randflight/specfun.hpp"

namespace randflight {

namespace {

double norm2(std::span<const double> v)
{
    double sq = 0;
    for (double c : v)
        sq += c * c;
    return std::sqrt(sq);
}

} // namespace

DissipationLaw::DissipationLaw(Kind kind, int dim, double k)
    : kind_(kind), dim_(dim), k_(k), norm_(0)
{
    if (kind == Kind::uniform)
        norm_ = 1 / unit_sphere_area(dim);
    else
        norm_ = 1 / (2 * std::numbers::pi * bessel_i0(k));
}

DissipationLaw DissipationLaw::uniform(int dim)
{
    if (dim < 2)
        throw std::domain_error("DissipationLaw: dimension must be at least 2");
    return DissipationLaw(Kind::uniform, dim, 0);
}

DissipationLaw DissipationLaw::circular_gaussian(double k)
{
    if (!std::isfinite(k) || std::abs(k) > 10)
        throw std::domain_error("DissipationLaw: concentration must satisfy |k| <= 10");
    return DissipationLaw(Kind::circular_gaussian, 2, k);
}

double DissipationLaw::chi_angle(double theta) const
{
    if (kind_ == Kind::uniform)
        return norm_;
    return norm_ * std::exp(k_ * std::cos(theta));
}

double DissipationLaw::chi(std::span<const double> u) const
{
    if (u.size() != static_cast<std::size_t>(dim_))
        throw std::domain_error("chi: wrong dimension");
    if (std::abs(norm2(u) - 1) > 1e-12)
        throw std::domain_error("chi: direction is not a unit vector");
    if (kind_ == Kind::uniform)
        return norm_;
    return norm_ * std::exp(k_ * u[0]);
}

double DissipationLaw::rho(std::span<const double> x, const FlightParams& params, double t) const
{
    if (x.size() != static_cast<std::size_t>(dim_) || params.dim() != dim_)
        throw std::domain_error("rho: wrong dimension");
    const double reach = params.radius(t);
    const double r = norm2(x);
    if (!(t > 0) || std::abs(r - reach) > 1e-9 * reach)
        throw std::domain_error("rho: point is not on the sphere |x| = ct");
    if (kind_ == Kind::uniform)
        return norm_;
    return norm_ * std::exp(k_ * x[0] / r);
}

void DissipationLaw::sample(RandomStream& rng, std::span<double> u) const
{
    if (u.size() != static_cast<std::size_t>(dim_))
        throw std::domain_error("sample: wrong dimension");
    if (kind_ == Kind::uniform)
    {
        std::normal_distribution<double> normal;
        double sq = 0;
        do
        {
            sq = 0;
            for (double& c : u)
            {
                c = normal(rng);
                sq += c * c;
            }
        } while (sq == 0);
        const double inv = 1 / std::sqrt(sq);
        for (double& c : u)
            c *= inv;
        return;
    }
    std::uniform_real_distribution<double> unit;
    const double peak = std::abs(k_);
    double theta;
    do
    {
        theta = std::numbers::pi * (2 * unit(rng) - 1);
    } while (unit(rng) >= std::exp(k_ * std::cos(theta) - peak));
    u[0] = std::cos(theta);
    u[1] = std::sin(theta);
}

std::vector<double> DissipationLaw::sample(RandomStream& rng) const
{
    std::vector<double> u(static_cast<std::size_t>(dim_));
    sample(rng, u);
    return u;
}

double chi_eval(const DissipationLaw& law, std::span<const double> u)
{
    return law.chi(u);
}

double rho_eval(const DissipationLaw& law, std::span<const double> x, const FlightParams& params,
                double t)
{
    return law.rho(x, params, t);
}

std::vector<double> sample_direction(const DissipationLaw& law, RandomStream& rng)
{
    return law.sample(rng);
}

} // namespace randflight
