#pragma once

#include <functional>
#include <vector>

#include "randflight/analytic.hpp"
#include "randflight/core.hpp"
#include "randflight/dissipation.hpp"

namespace randflight {

enum class RegionCase
{
    empty,
    partial_cap,
    full_sphere
};

/*!
 * Intersection of the sphere |xi - x| = c(t - tau) with the open ball
 * |xi| < c tau.
 *
 * Points of the sphere are written xi = x - rho u with u a unit vector.
 * The region is the cap of directions u within half_angle of x/|x|.
 */
struct IntersectionRegion
{
    RegionCase kind;
    double t;
    double tau;
    double center_norm;  //!< |x|
    double center_angle; //!< polar angle of x (planar)
    double radius;       //!< rho = c (t - tau)
    double ball_radius;  //!< c tau
    double half_angle;   //!< 0 when empty, pi for the full sphere
    int dim;

    //! Arc bounds of u, absolute polar angles (planar).
    double arc_lower() const { return center_angle - half_angle; }
    double arc_upper() const { return center_angle + half_angle; }
};

IntersectionRegion classify_intersection(const FlightParams& params, const EvalPoint& x,
                                         double tau);
IntersectionRegion classify_intersection(const FlightParams& params, double r, double theta,
                                         double t, double tau);

//! Earliest and tangency times t/2 -+ |x|/(2c).
double cap_open_time(const FlightParams& params, double r, double t);
double cap_full_time(const FlightParams& params, double r, double t);

struct ConvolutionOptions
{
    int time_level = 4;      //!< tanh-sinh level of each time interval
    int angle_level = 4;     //!< tanh-sinh level of each arc
    int seed_points = 128;   //!< Gauss-Legendre points for the two-delta seed
    unsigned threads = 0;    //!< 0: default_threads()
};

//! Integrand on the sphere, given |xi| and the polar angle of xi.
using SurfaceIntegrand = std::function<double(double, double)>;

/*!
 * Integral over the region of rho(x - xi, t - tau) g(xi) with respect to
 * the surface measure of the sphere of radius c (t - tau).
 *
 * Non-planar regions require a symmetric law and an integrand depending
 * on |xi| only.
 */
double surface_integral(const FlightParams& params, const DissipationLaw& law,
                        const IntersectionRegion& region, const SurfaceIntegrand& integrand,
                        const ConvolutionOptions& options = {});

//! Same with the law replaced by a constant surface weight.
double surface_integral(const IntersectionRegion& region, double weight,
                        const SurfaceIntegrand& integrand, const ConvolutionOptions& options = {});

DensityLayer seed_layer_1(const FlightParams& params, const DissipationLaw& law, double t,
                          const LayerGrid& grid, const ConvolutionOptions& options = {});

//! Joint layer n + 1 on `grid` from joint layer n.
DensityLayer next_layer(const FlightParams& params, const DissipationLaw& law,
                        const DensityLayer& layer, const LayerGrid& grid,
                        const ConvolutionOptions& options = {});

//! Joint layer divided by its Poisson weight.
DensityLayer conditional_layer(const DensityLayer& layer, const FlightParams& params);

/*!
 * Conditional layer n + 1 from conditional layer n through the
 * tau^n-weighted recurrence. Uses graded Gauss-Legendre rules, so it is
 * independent of the quadrature in next_layer.
 */
DensityLayer next_conditional_layer(const FlightParams& params, const DissipationLaw& law,
                                    const DensityLayer& layer, const LayerGrid& grid,
                                    const ConvolutionOptions& options = {});

//! Singular layer, layers 1..K and the Poisson tail beyond K.
class DensityField
{
  public:
    DensityField(const FlightParams& params, const DissipationLaw& law, double t, LayerGrid grid,
                 std::vector<DensityLayer> layers);

    const FlightParams& params() const noexcept { return params_; }
    const DissipationLaw& law() const noexcept { return law_; }
    double time() const noexcept { return t_; }
    const LayerGrid& grid() const noexcept { return grid_; }
    const SingularLayer& singular() const noexcept { return singular_; }
    double singular_weight() const noexcept { return singular_.weight(); }
    const std::vector<DensityLayer>& layers() const noexcept { return layers_; }
    int max_index() const noexcept { return static_cast<int>(layers_.size()); }
    double tail_mass() const noexcept { return tail_; }

    //! Singular weight + layer masses + tail.
    double total_mass() const;
    //! Sum of the layers at grid node (i, j).
    double ac_node(std::size_t i, std::size_t j = 0) const;
    //! All node sums, row-major (radius, angle).
    std::vector<double> ac_values() const;
    //! Sum of the layers anywhere; 0 outside the open ball.
    double ac_value(double r, double theta = 0) const;

  private:
    FlightParams params_;
    DissipationLaw law_;
    double t_;
    LayerGrid grid_;
    SingularLayer singular_;
    std::vector<DensityLayer> layers_;
    double tail_;
};

DensityField transition_density(const FlightParams& params, const DissipationLaw& law, double t,
                                int max_index, const LayerGrid& grid,
                                const ConvolutionOptions& options = {});

/*!
 * Sup over grid nodes of |p_ac - (seed + operator applied to the layers)|,
 * the defect of the field in the renewal integral equation.
 */
double residual_check(const DensityField& field, const LayerGrid& grid,
                      const ConvolutionOptions& options = {});

} // namespace randflight
