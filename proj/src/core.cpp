#include "randflight/core.hpp"

#include <cstdlib>
#include <numbers>
#include <string>

namespace randflight {

FlightParams::FlightParams(int dim, double speed, double rate)
    : dim_(dim), speed_(speed), rate_(rate)
{
    if (dim < 2)
        throw std::domain_error("FlightParams: dimension must be at least 2");
    if (!(speed > 0) || !std::isfinite(speed))
        throw std::domain_error("FlightParams: speed must be positive");
    if (!(rate > 0) || !std::isfinite(rate))
        throw std::domain_error("FlightParams: rate must be positive");
}

EvalPoint::EvalPoint(std::vector<double> x, double t) : x_(std::move(x)), t_(t), r_(0)
{
    if (x_.size() < 2)
        throw std::domain_error("EvalPoint: need at least two coordinates");
    if (!(t > 0))
        throw std::domain_error("EvalPoint: time must be positive");
    double sq = 0;
    for (double v : x_)
        sq += v * v;
    r_ = std::sqrt(sq);
}

double EvalPoint::angle() const noexcept
{
    return std::atan2(x_[1], x_[0]);
}

double poisson_weight(int n, const FlightParams& params, double t)
{
    if (n < 0)
        throw std::domain_error("poisson_weight: negative event count");
    if (!(t > 0))
        throw std::domain_error("poisson_weight: time must be positive");
    const double mean = params.rate() * t;
    if (n == 0)
        return std::exp(-mean);
    return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

double tail_mass(int max_index, const FlightParams& params, double t)
{
    if (max_index < 0)
        throw std::domain_error("tail_mass: negative truncation index");
    const double mean = params.rate() * t;
    if (max_index + 1 <= mean)
    {
        double head = 0;
        for (int n = 0; n <= max_index; ++n)
            head += poisson_weight(n, params, t);
        return 1 - head;
    }
    // Terms decrease from here on; sum upward until negligible.
    double term = poisson_weight(max_index + 1, params, t);
    double sum = 0;
    for (int n = max_index + 1; term > 0; ++n)
    {
        sum += term;
        if (term < 1e-18 * sum)
            break;
        term *= mean / (n + 1.0);
    }
    return sum;
}

double unit_sphere_area(int dim)
{
    return 2 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

double ball_volume(int dim, double r)
{
    return unit_sphere_area(dim) * std::pow(r, dim) / dim;
}

//---------------------------------------------------------------------------//

RadialGrid::RadialGrid(const FlightParams& params, double t, std::vector<double> nodes,
                       double epsilon)
    : t_(t), outer_(params.radius(t)), epsilon_(epsilon), nodes_(std::move(nodes))
{
    if (!(t > 0))
        throw std::domain_error("RadialGrid: time must be positive");
    if (!(epsilon > 0) || epsilon >= outer_)
        throw std::domain_error("RadialGrid: boundary standoff must lie in (0, ct)");
    if (nodes_.empty())
        throw std::domain_error("RadialGrid: no nodes");
    if (nodes_.front() < 0)
        throw std::domain_error("RadialGrid: negative radius");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (!(nodes_[i] > nodes_[i - 1]))
            throw std::domain_error("RadialGrid: nodes must be strictly increasing");
    if (nodes_.back() > outer_ - epsilon * (1 - 1e-12))
        throw std::domain_error("RadialGrid: node beyond ct - eps");
}

RadialGrid RadialGrid::clustered(const FlightParams& params, double t, std::size_t n_r,
                                 std::optional<double> epsilon)
{
    if (n_r < 2)
        throw std::domain_error("RadialGrid: need at least two nodes");
    const double eps = epsilon.value_or(default_epsilon(params, t));
    const double reach = params.radius(t) - eps;
    std::vector<double> nodes(n_r);
    for (std::size_t i = 0; i < n_r; ++i)
        nodes[i] = reach * std::sin(0.5 * std::numbers::pi * static_cast<double>(i)
                                    / static_cast<double>(n_r - 1));
    nodes.back() = reach;
    return RadialGrid(params, t, std::move(nodes), eps);
}

RadialGrid RadialGrid::uniform(const FlightParams& params, double t, std::size_t n_r,
                               std::optional<double> epsilon)
{
    if (n_r < 1)
        throw std::domain_error("RadialGrid: need at least one node");
    const double eps = epsilon.value_or(default_epsilon(params, t));
    const double step = (params.radius(t) - eps) / static_cast<double>(n_r);
    std::vector<double> nodes(n_r);
    for (std::size_t i = 0; i < n_r; ++i)
        nodes[i] = (static_cast<double>(i) + 0.5) * step;
    return RadialGrid(params, t, std::move(nodes), eps);
}

PolarGrid::PolarGrid(RadialGrid radial, std::size_t n_theta)
    : radial_(std::move(radial)), n_theta_(n_theta)
{
    if (n_theta < 8 || n_theta % 2 != 0)
        throw std::domain_error("PolarGrid: angular count must be even and at least 8");
}

PolarGrid PolarGrid::clustered(const FlightParams& params, double t, std::size_t n_r,
                               std::size_t n_theta, std::optional<double> epsilon)
{
    if (params.dim() != 2)
        throw std::domain_error("PolarGrid: planar flights only");
    return PolarGrid(RadialGrid::clustered(params, t, n_r, epsilon), n_theta);
}

double PolarGrid::theta_step() const
{
    return 2 * std::numbers::pi / static_cast<double>(n_theta_);
}

double PolarGrid::theta(std::size_t j) const
{
    return -std::numbers::pi + theta_step() * static_cast<double>(j);
}

const RadialGrid& radial_part(const LayerGrid& grid)
{
    if (const auto* polar = std::get_if<PolarGrid>(&grid))
        return polar->radial();
    return std::get<RadialGrid>(grid);
}

std::size_t angular_size(const LayerGrid& grid)
{
    if (const auto* polar = std::get_if<PolarGrid>(&grid))
        return polar->n_theta();
    return 1;
}

double grid_time(const LayerGrid& grid)
{
    return radial_part(grid).time();
}

double grid_theta(const LayerGrid& grid, std::size_t j)
{
    if (const auto* polar = std::get_if<PolarGrid>(&grid))
        return polar->theta(j);
    return 0;
}

//---------------------------------------------------------------------------//

double boundary_weight(int dim, int index, double z)
{
    return boundary_weight(dim, index, z, 1 - z);
}

double boundary_weight(int dim, int index, double z, double one_minus_z)
{
    const double gap = one_minus_z * (1 + z);
    if (dim == 2)
    {
        if (index == 2)
            return 1;
        return std::pow(gap, 0.5 * (index - 2));
    }
    if (dim == 3 && index == 1)
    {
        if (z < 1e-4)
            return 1 + z * z / 3 + z * z * z * z / 5;
        return 0.5 * std::log((1 + z) / one_minus_z) / z;
    }
    return 1;
}

LayerProfile::LayerProfile(int dim, int index, std::vector<double> z_nodes,
                           std::size_t n_theta, std::span<const double> shape_values)
    : dim_(dim), index_(index), z_(std::move(z_nodes)), n_theta_(n_theta)
{
    if (z_.empty() || n_theta == 0 || shape_values.size() != z_.size() * n_theta)
        throw std::invalid_argument("LayerProfile: value count does not match grid");
    if (z_.back() >= 1)
        throw std::domain_error("LayerProfile: nodes must lie inside the unit ball");
    q_.resize(shape_values.size());
    for (std::size_t i = 0; i < z_.size(); ++i)
    {
        const double w = boundary_weight(dim, index, z_[i]);
        for (std::size_t j = 0; j < n_theta; ++j)
            q_[i * n_theta + j] = shape_values[i * n_theta + j] / w;
    }
}

double LayerProfile::regularized(double z, double theta) const
{
    // Angular bracket and weight
    std::size_t j0 = 0;
    std::size_t j1 = 0;
    double ft = 0;
    if (n_theta_ > 1)
    {
        const double step = 2 * std::numbers::pi / static_cast<double>(n_theta_);
        const double s = (theta + std::numbers::pi) / step;
        const double fl = std::floor(s);
        ft = s - fl;
        const auto n = static_cast<long>(n_theta_);
        long k = static_cast<long>(fl) % n;
        if (k < 0)
            k += n;
        j0 = static_cast<std::size_t>(k);
        j1 = (j0 + 1) % n_theta_;
    }
    auto column = [&](std::size_t i) {
        const double a = q_[i * n_theta_ + j0];
        return ft == 0 ? a : a + ft * (q_[i * n_theta_ + j1] - a);
    };

    const std::size_t n = z_.size();
    if (z <= z_.front() || n == 1)
        return column(0);
    std::size_t hi;
    if (z >= z_.back())
        hi = n - 1;
    else
        hi = static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), z) - z_.begin());
    const std::size_t lo = hi - 1;
    const double a = column(lo);
    const double b = column(hi);
    // Linear in the bracket; linear extrapolation past the last node.
    const double v = a + (b - a) * (z - z_[lo]) / (z_[hi] - z_[lo]);
    return std::max(v, 0.0);
}

double LayerProfile::shape(double z, double theta) const
{
    return shape(z, 1 - z, theta);
}

double LayerProfile::shape(double z, double one_minus_z, double theta) const
{
    if (!(one_minus_z > 0) || z < 0)
        return 0;
    return regularized(z, theta) * boundary_weight(dim_, index_, z, one_minus_z);
}

double LayerProfile::integral() const
{
    return integrate([](double, double) { return 1.0; });
}

const GaussLegendre& LayerProfile::panel_rule()
{
    static const GaussLegendre rule(8);
    return rule;
}

const TanhSinh& LayerProfile::edge_rule()
{
    static const TanhSinh rule(5);
    return rule;
}

//---------------------------------------------------------------------------//

namespace {

std::vector<double> scaled_nodes(const LayerGrid& grid, double reach)
{
    std::vector<double> z = radial_part(grid).nodes();
    for (double& v : z)
        v /= reach;
    return z;
}

LayerProfile make_profile(const FlightParams& params, int index, const LayerGrid& grid,
                          const std::vector<double>& values, LayerKind kind)
{
    const double t = grid_time(grid);
    const double reach = params.radius(t);
    double scale = std::pow(reach, params.dim());
    if (kind == LayerKind::joint)
    {
        const double weight = poisson_weight(index, params, t);
        if (!(weight > 0))
            throw NumericError("DensityLayer: Poisson weight underflows");
        scale /= weight;
    }
    std::vector<double> shape(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        shape[i] = values[i] * scale;
    return LayerProfile(params.dim(), index, scaled_nodes(grid, reach), angular_size(grid),
                        shape);
}

} // namespace

DensityLayer::DensityLayer(const FlightParams& params, int index, LayerGrid grid,
                           std::vector<double> values, LayerKind kind)
    : params_(params),
      index_(index),
      grid_(std::move(grid)),
      values_(std::move(values)),
      kind_(kind),
      profile_((index < 1 ? throw std::domain_error("DensityLayer: index must be >= 1")
                          : make_profile(params_, index, grid_, values_, kind)))
{
    if (is_polar() && params.dim() != 2)
        throw std::domain_error("DensityLayer: polar grids are planar only");
    for (double v : values_)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::domain_error("DensityLayer: values must be finite and nonnegative");
}

double DensityLayer::value(std::size_t i, std::size_t j) const
{
    return values_.at(i * angular_size(grid_) + j);
}

double DensityLayer::time_weight(double tau) const
{
    return kind_ == LayerKind::joint ? poisson_weight(index_, params_, tau) : 1.0;
}

double DensityLayer::value_at(double r, double theta) const
{
    return scaled_value(r, theta, time());
}

double DensityLayer::scaled_value(double r, double theta, double tau) const
{
    const double reach = params_.radius(tau);
    const double z = r / reach;
    if (!(z < 1))
        return 0;
    return time_weight(tau) * profile_.shape(z, theta) / std::pow(reach, params_.dim());
}

double DensityLayer::mass() const
{
    return time_weight(time()) * profile_.integral();
}

//---------------------------------------------------------------------------//

unsigned default_threads()
{
    if (const char* env = std::getenv("RANDFLIGHT_THREADS"))
    {
        try
        {
            const long v = std::stol(env);
            if (v > 0)
                return static_cast<unsigned>(v);
        }
        catch (const std::exception&)
        {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace randflight
