#pragma once

#include <random>
#include <span>
#include <vector>

#include "randflight/core.hpp"

namespace randflight {

using RandomStream = std::mt19937_64;

/*!
 * Density chi of new directions on the unit sphere, with respect to the
 * surface measure of the unit sphere.
 */
class DissipationLaw
{
  public:
    enum class Kind
    {
        uniform,
        circular_gaussian
    };

    static DissipationLaw uniform(int dim);
    //! e^{k cos(theta)} / (2 pi I0(k)) on the unit circle; |k| <= 10.
    static DissipationLaw circular_gaussian(double k);

    Kind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    double concentration() const noexcept { return k_; }
    //! True when chi is constant, so all layers depend on |x| only.
    bool is_symmetric() const noexcept { return kind_ == Kind::uniform || k_ == 0; }

    //! Density at a unit vector.
    double chi(std::span<const double> u) const;
    //! Planar density at polar angle theta.
    double chi_angle(double theta) const;
    //! Scaled sphere density chi(x/(ct)) at |x| = ct.
    double rho(std::span<const double> x, const FlightParams& params, double t) const;

    //! Exact draw from chi, written into u (size dim).
    void sample(RandomStream& rng, std::span<double> u) const;
    std::vector<double> sample(RandomStream& rng) const;

  private:
    DissipationLaw(Kind kind, int dim, double k);

    Kind kind_;
    int dim_;
    double k_;
    double norm_;
};

double chi_eval(const DissipationLaw& law, std::span<const double> u);
double rho_eval(const DissipationLaw& law, std::span<const double> x, const FlightParams& params,
                double t);
std::vector<double> sample_direction(const DissipationLaw& law, RandomStream& rng);

} // namespace randflight
