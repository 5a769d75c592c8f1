#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "randflight/quadrature.hpp"

namespace randflight {

//! Raised when a computation loses meaning numerically (underflow,
//! non-convergence, insufficient truncation).
class NumericError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
/*!
 * Dimension, speed and switching rate of a random flight.
 */
class FlightParams
{
  public:
    FlightParams(int dim, double speed, double rate);

    int dim() const noexcept { return dim_; }
    double speed() const noexcept { return speed_; }
    double rate() const noexcept { return rate_; }

    //! Radius c*t of the reachable ball.
    double radius(double t) const noexcept { return speed_ * t; }

  private:
    int dim_;
    double speed_;
    double rate_;
};

//! A position together with the observation time.
class EvalPoint
{
  public:
    EvalPoint(std::vector<double> x, double t);

    std::span<const double> x() const noexcept { return x_; }
    double time() const noexcept { return t_; }
    double norm() const noexcept { return r_; }
    //! Polar angle of the first two coordinates.
    double angle() const noexcept;

  private:
    std::vector<double> x_;
    double t_;
    double r_;
};

//! Probability of exactly n switching events by time t.
double poisson_weight(int n, const FlightParams& params, double t);

//! Probability of more than K switching events by time t.
double tail_mass(int max_index, const FlightParams& params, double t);

//! Surface area of the unit sphere in R^dim.
double unit_sphere_area(int dim);

//! Volume of the ball of radius r in R^dim.
double ball_volume(int dim, double r);

//---------------------------------------------------------------------------//
// Grids
//---------------------------------------------------------------------------//

//! Default standoff from the sphere |x| = ct.
inline double default_epsilon(const FlightParams& params, double t)
{
    return 1e-3 * params.radius(t);
}

class RadialGrid
{
  public:
    RadialGrid(const FlightParams& params, double t, std::vector<double> nodes, double epsilon);

    //! Nodes R*sin(pi*i/(2(n-1))) with R = ct - eps: dense near the boundary.
    static RadialGrid clustered(const FlightParams& params, double t, std::size_t n_r,
                                std::optional<double> epsilon = {});
    //! Cell-centred nodes (i + 1/2) h, h = (ct - eps)/n.
    static RadialGrid uniform(const FlightParams& params, double t, std::size_t n_r,
                              std::optional<double> epsilon = {});

    double time() const noexcept { return t_; }
    double outer_radius() const noexcept { return outer_; }
    double epsilon() const noexcept { return epsilon_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double operator[](std::size_t i) const { return nodes_[i]; }

  private:
    double t_;
    double outer_;
    double epsilon_;
    std::vector<double> nodes_;
};

class PolarGrid
{
  public:
    PolarGrid(RadialGrid radial, std::size_t n_theta);

    static PolarGrid clustered(const FlightParams& params, double t, std::size_t n_r,
                               std::size_t n_theta, std::optional<double> epsilon = {});

    const RadialGrid& radial() const noexcept { return radial_; }
    double time() const noexcept { return radial_.time(); }
    std::size_t n_theta() const noexcept { return n_theta_; }
    double theta(std::size_t j) const;
    double theta_step() const;

  private:
    RadialGrid radial_;
    std::size_t n_theta_;
};

using LayerGrid = std::variant<RadialGrid, PolarGrid>;

const RadialGrid& radial_part(const LayerGrid& grid);
std::size_t angular_size(const LayerGrid& grid);
double grid_time(const LayerGrid& grid);
//! Angle of node column j (0 for radial grids).
double grid_theta(const LayerGrid& grid, std::size_t j);

//---------------------------------------------------------------------------//
// Layers
//---------------------------------------------------------------------------//

/*!
 * Boundary factor w(z) of layer n at scaled radius z = |x|/(ct).
 *
 * Planar layers behave like (1 - z^2)^((n-2)/2) at the sphere; the
 * one-turn layer in R^3 diverges logarithmically. Dividing by w leaves a
 * profile that is bounded and smooth up to z = 1.
 */
double boundary_weight(int dim, int index, double z);
//! Same with 1 - z supplied exactly.
double boundary_weight(int dim, int index, double z, double one_minus_z);

/*!
 * Dimensionless shape of a layer on the unit ball.
 *
 * Conditioned on n events by time t the position is ct times a random
 * vector whose law does not depend on t, lambda or c. The profile stores
 * that density (regularized by the boundary weight) and evaluates it by
 * piecewise-linear interpolation in z and periodic linear interpolation
 * in the polar angle.
 */
class LayerProfile
{
  public:
    LayerProfile(int dim, int index, std::vector<double> z_nodes, std::size_t n_theta,
                 std::span<const double> shape_values);

    //! Density on the unit ball at scaled radius z and angle theta.
    double shape(double z, double theta = 0) const;

    //! Integral of the shape over the unit ball.
    double integral() const;

    /*!
     * Integral of shape * kernel over the unit ball. The kernel receives
     * (z, theta); radial profiles pass theta = 0 and include the sphere
     * area factor.
     */
    template<class K>
    auto integrate(K&& kernel) const -> decltype(kernel(0.0, 0.0));

    int dim() const noexcept { return dim_; }
    int index() const noexcept { return index_; }
    bool is_polar() const noexcept { return n_theta_ > 1; }

  private:
    double regularized(double z, double theta) const;
    double shape(double z, double one_minus_z, double theta) const;
    template<class K>
    auto angular_integral(K& kernel, double s) const -> decltype(kernel(0.0, 0.0));

    int dim_;
    int index_;
    std::vector<double> z_;
    std::size_t n_theta_;
    std::vector<double> q_;

    static const GaussLegendre& panel_rule();
    static const TanhSinh& edge_rule();
};

enum class LayerKind
{
    joint,
    conditional
};

/*!
 * Grid-sampled density of the position jointly with (or conditioned on)
 * exactly n switching events, n >= 1.
 */
class DensityLayer
{
  public:
    DensityLayer(const FlightParams& params, int index, LayerGrid grid,
                 std::vector<double> values, LayerKind kind);

    const FlightParams& params() const noexcept { return params_; }
    int index() const noexcept { return index_; }
    LayerKind kind() const noexcept { return kind_; }
    const LayerGrid& grid() const noexcept { return grid_; }
    double time() const { return grid_time(grid_); }
    const std::vector<double>& values() const noexcept { return values_; }
    double value(std::size_t i, std::size_t j = 0) const;
    bool is_polar() const noexcept { return std::holds_alternative<PolarGrid>(grid_); }
    const LayerProfile& profile() const noexcept { return profile_; }

    //! Probability factor relating the stored values to the shape at time tau.
    double time_weight(double tau) const;

    //! Density at time t and any point of the ball (0 outside).
    double value_at(double r, double theta = 0) const;

    //! Same layer observed at time tau, from the exact self-similar scaling.
    double scaled_value(double r, double theta, double tau) const;

    //! Total probability carried by the layer.
    double mass() const;

  private:
    FlightParams params_;
    int index_;
    LayerGrid grid_;
    std::vector<double> values_;
    LayerKind kind_;
    LayerProfile profile_;
};

//---------------------------------------------------------------------------//
// Worker pool helpers
//---------------------------------------------------------------------------//

//! RANDFLIGHT_THREADS if set, else the hardware concurrency.
unsigned default_threads();

/*!
 * Run fn(i) for i in [0, count) on `threads` workers. Each index is
 * independent, so results do not depend on the worker count.
 */
template<class F>
void parallel_for(std::size_t count, unsigned threads, F&& fn)
{
    if (threads == 0)
        threads = default_threads();
    if (threads <= 1 || count <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::exception_ptr error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
    {
        pool.emplace_back([&, w] {
            try
            {
                for (std::size_t i = w; i < count; i += threads)
                    fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_lock);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

//---------------------------------------------------------------------------//
// Template definitions
//---------------------------------------------------------------------------//

// Angular integral at z = 1 - s^2.
template<class K>
auto LayerProfile::angular_integral(K& kernel, double s) const -> decltype(kernel(0.0, 0.0))
{
    using R = decltype(kernel(0.0, 0.0));
    const double gap = s * s;
    const double z = 1 - gap;
    if (!is_polar())
        return unit_sphere_area(dim_) * std::pow(z, dim_ - 1) * shape(z, gap, 0.0) * kernel(z, 0.0);
    // Refine the angular nodes by an integer factor; trapezoid is exact on
    // the piecewise-linear profile and spectrally accurate on the kernel.
    constexpr std::size_t refine = 4;
    const std::size_t count = n_theta_ * refine;
    const double step = 2 * std::numbers::pi / static_cast<double>(count);
    R acc{};
    for (std::size_t j = 0; j < count; ++j)
    {
        const double theta = -std::numbers::pi + step * static_cast<double>(j);
        acc += shape(z, gap, theta) * kernel(z, theta);
    }
    return acc * (step * z);
}

template<class K>
auto LayerProfile::integrate(K&& kernel) const -> decltype(kernel(0.0, 0.0))
{
    using R = decltype(kernel(0.0, 0.0));
    // z = 1 - s^2 absorbs the inverse square root at the sphere
    auto radial = [&](double s) { return angular_integral(kernel, s) * (2 * s); };
    R acc{};
    double lo = 0;
    for (double node : z_)
    {
        if (node > lo)
            acc += panel_rule().integrate(radial, std::sqrt(1 - node), std::sqrt(1 - lo));
        lo = node;
    }
    if (lo < 1)
        acc += edge_rule().integrate(radial, 0.0, std::sqrt(1 - lo));
    return acc;
}

} // namespace randflight
