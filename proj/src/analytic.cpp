#include "randflight/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "randflight/specfun.hpp"

namespace randflight {

namespace {

void check_interior(const FlightParams& params, double r, double t, const char* who)
{
    if (!(t > 0))
        throw std::domain_error(std::string(who) + ": time must be positive");
    if (!(r >= 0) || r >= params.radius(t))
        throw std::domain_error(std::string(who) + ": point outside the open ball |x| < ct");
}

} // namespace

double f1_symmetric(const FlightParams& params, double r, double t)
{
    check_interior(params, r, t, "f1_symmetric");
    const int m = params.dim();
    const double c = params.speed();
    const double lam = params.rate();
    const double reach = params.radius(t);
    if (m == 2)
        return lam * std::exp(-lam * t)
               / (2 * std::numbers::pi * c * std::sqrt((reach - r) * (reach + r)));
    const double z = (r / reach) * (r / reach);
    const double coeff = lam * std::exp(-lam * t) * std::ldexp(1.0, m - 3) * gamma_half(m)
                         / (std::pow(std::numbers::pi, 0.5 * m) * std::pow(c, m)
                            * std::pow(t, m - 1));
    // near the sphere the m = 3 series decays like z^k / k
    SeriesControl control;
    control.max_terms = 5000000;
    return coeff * gauss_2f1(0.5 * (m - 1), 2 - 0.5 * m, 0.5 * m, z, control);
}

double f1_symmetric(const FlightParams& params, const EvalPoint& x)
{
    if (x.x().size() != static_cast<std::size_t>(params.dim()))
        throw std::domain_error("f1_symmetric: point has the wrong dimension");
    return f1_symmetric(params, x.norm(), x.time());
}

double f1_r3(const FlightParams& params, double r, double t)
{
    if (params.dim() != 3)
        throw std::domain_error("f1_r3: three-dimensional flights only");
    check_interior(params, r, t, "f1_r3");
    const double lam = params.rate();
    const double c = params.speed();
    const double u = r / params.radius(t);
    const double base = lam * std::exp(-lam * t) / (2 * std::numbers::pi * c * c * c * t * t);
    if (u < 1e-4)
        return base * (1 + u * u / 3 + u * u * u * u / 5);
    return base * std::atanh(u) / u;
}

double f1_r3(const FlightParams& params, const EvalPoint& x)
{
    if (x.x().size() != 3)
        throw std::domain_error("f1_r3: point has the wrong dimension");
    return f1_r3(params, x.norm(), x.time());
}

double planar_ac_density(const FlightParams& params, double r, double t)
{
    if (params.dim() != 2)
        throw std::domain_error("planar_ac_density: planar flights only");
    check_interior(params, r, t, "planar_ac_density");
    const double c = params.speed();
    const double lam = params.rate();
    const double reach = params.radius(t);
    const double root = std::sqrt((reach - r) * (reach + r));
    return lam / (2 * std::numbers::pi * c) * std::exp(-lam * t + lam / c * root) / root;
}

SingularLayer::SingularLayer(const FlightParams& params, const DissipationLaw& law, double t)
    : params_(params), law_(law), t_(t), weight_(0), radius_(params.radius(t))
{
    if (!(t > 0))
        throw std::domain_error("SingularLayer: time must be positive");
    if (law.dim() != params.dim())
        throw std::domain_error("SingularLayer: law and flight dimensions differ");
    weight_ = poisson_weight(0, params, t);
}

double SingularLayer::surface_density(std::span<const double> x) const
{
    return weight_ * law_.rho(x, params_, t_) / std::pow(radius_, params_.dim() - 1);
}

double SingularLayer::surface_density_angle(double theta) const
{
    if (params_.dim() != 2)
        throw std::domain_error("SingularLayer: angular form is planar only");
    return weight_ * law_.chi_angle(theta) / radius_;
}

double SingularLayer::total_mass() const
{
    if (params_.dim() == 2)
    {
        // periodic trapezoid, spectrally accurate for the smooth chi
        constexpr int count = 256;
        const double step = 2 * std::numbers::pi / count;
        double acc = 0;
        for (int j = 0; j < count; ++j)
            acc += surface_density_angle(-std::numbers::pi + j * step);
        return acc * step * radius_;
    }
    return weight_;
}

SingularLayer singular_layer(const FlightParams& params, const DissipationLaw& law, double t)
{
    return SingularLayer(params, law, t);
}

} // namespace randflight
