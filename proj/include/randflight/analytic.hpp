#pragma once

#include <span>

#include "randflight/core.hpp"
#include "randflight/dissipation.hpp"

namespace randflight {

//! Joint density of position and exactly one turn, uniform directions.
double f1_symmetric(const FlightParams& params, const EvalPoint& x);
double f1_symmetric(const FlightParams& params, double r, double t);

//! Logarithmic one-turn closed form in R^3.
double f1_r3(const FlightParams& params, const EvalPoint& x);
double f1_r3(const FlightParams& params, double r, double t);

//! Absolutely continuous density of the planar uniform flight, all turns.
double planar_ac_density(const FlightParams& params, double r, double t);

//! Zero-turn component: mass e^{-lambda t} spread over |x| = ct.
class SingularLayer
{
  public:
    SingularLayer(const FlightParams& params, const DissipationLaw& law, double t);

    double time() const noexcept { return t_; }
    double weight() const noexcept { return weight_; }
    double radius() const noexcept { return radius_; }
    const DissipationLaw& law() const noexcept { return law_; }

    //! Density per unit surface measure of the sphere of radius ct.
    double surface_density(std::span<const double> x) const;
    //! Planar surface density at polar angle theta.
    double surface_density_angle(double theta) const;
    //! Integral of the surface density over the sphere.
    double total_mass() const;

  private:
    FlightParams params_;
    DissipationLaw law_;
    double t_;
    double weight_;
    double radius_;
};

SingularLayer singular_layer(const FlightParams& params, const DissipationLaw& law, double t);

} // namespace randflight
