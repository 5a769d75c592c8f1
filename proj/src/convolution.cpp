#include "randflight/convolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace randflight {

namespace {

constexpr double pi = std::numbers::pi;

// |xi| and the polar angle of xi relative to x for xi = x - rho u, where u
// makes angle phi with x.
inline void xi_polar(double r, double rho, double phi, double& norm, double& angle)
{
    const double s = std::sin(0.5 * phi);
    norm = std::sqrt((r - rho) * (r - rho) + 4 * r * rho * s * s);
    angle = std::atan2(-rho * std::sin(phi), r - rho * std::cos(phi));
}

// Constant density of a symmetric law.
double symmetric_chi(const DissipationLaw& law)
{
    return law.dim() == 2 ? law.chi_angle(0) : 1 / unit_sphere_area(law.dim());
}

void check_law(const FlightParams& params, const DissipationLaw& law, const LayerGrid& grid)
{
    if (law.dim() != params.dim())
        throw std::domain_error("law and flight dimensions differ");
    if (std::holds_alternative<PolarGrid>(grid))
    {
        if (params.dim() != 2)
            throw std::domain_error("polar grids are planar only");
    }
    else if (!law.is_symmetric())
    {
        throw std::domain_error("a non-symmetric law needs a polar grid");
    }
    const RadialGrid& radial = radial_part(grid);
    if (radial.nodes().back() >= params.radius(radial.time()))
        throw std::domain_error("grid node on or beyond the sphere |x| = ct");
}

/*
 * Integral over the cap of chi(u) shape(|xi|, angle of xi) d sigma(u), the
 * unit-sphere measure. `integ(f, a, b, sing_a, sing_b)` integrates over an
 * angular interval; the flags mark endpoints where the integrand may be
 * singular.
 */
template<class Integ, class Shape>
double cap_integral(const IntersectionRegion& region, const DissipationLaw& law, bool polar,
                    Integ&& integ, Shape&& shape)
{
    const double omega = region.half_angle;
    const double r = region.center_norm;
    const double rho = region.radius;
    if (!polar)
    {
        const double chi = symmetric_chi(law);
        if (region.dim == 2)
        {
            auto f = [&](double phi) {
                double norm, angle;
                xi_polar(r, rho, phi, norm, angle);
                return shape(norm, 0.0);
            };
            return 2 * chi * integ(f, 0.0, omega, false, true);
        }
        const int power = region.dim - 2;
        auto f = [&](double phi) {
            double norm, angle;
            xi_polar(r, rho, phi, norm, angle);
            return shape(norm, 0.0) * std::pow(std::sin(phi), power);
        };
        return chi * unit_sphere_area(region.dim - 1) * integ(f, 0.0, omega, false, true);
    }
    const double theta_x = region.center_angle;
    auto f = [&](double phi) {
        double norm, angle;
        xi_polar(r, rho, phi, norm, angle);
        return law.chi_angle(theta_x + phi) * shape(norm, theta_x + angle);
    };
    return integ(f, -omega, 0.0, true, false) + integ(f, 0.0, omega, false, true);
}

/*
 * One node of the recurrence: integral over tau of
 * weight(tau) (c tau)^{-m} cap_integral(profile at tau).
 */
template<class TimeInteg, class AngleInteg, class Weight>
double propagate_node(const FlightParams& params, const DissipationLaw& law,
                      const LayerProfile& profile, bool polar, double r, double theta, double t,
                      TimeInteg&& time_integ, AngleInteg&& angle_integ, Weight&& weight)
{
    const int m = params.dim();
    auto integrand = [&](double tau) {
        const IntersectionRegion region = classify_intersection(params, r, theta, t, tau);
        if (region.kind == RegionCase::empty)
            return 0.0;
        const double reach = region.ball_radius;
        auto shape = [&](double norm, double angle) { return profile.shape(norm / reach, angle); };
        const double cap = cap_integral(region, law, polar, angle_integ, shape);
        return weight(tau) / std::pow(reach, m) * cap;
    };
    const double open = cap_open_time(params, r, t);
    const double full = cap_full_time(params, r, t);
    if (r > 0)
        return time_integ(integrand, open, full, true, true)
               + time_integ(integrand, full, t, true, false);
    return time_integ(integrand, 0.5 * t, t, true, false);
}

template<class Fn>
std::vector<double> map_nodes(const LayerGrid& grid, unsigned threads, Fn&& fn)
{
    const RadialGrid& radial = radial_part(grid);
    const std::size_t n_theta = angular_size(grid);
    std::vector<double> values(radial.size() * n_theta);
    parallel_for(values.size(), threads, [&](std::size_t k) {
        const std::size_t i = k / n_theta;
        const std::size_t j = k % n_theta;
        values[k] = fn(radial[i], grid_theta(grid, j));
    });
    return values;
}

// Two-delta convolution for the one-turn layer of a planar law.
double seed_node(const FlightParams& params, const DissipationLaw& law, double r, double theta,
                 double t, const GaussLegendre& rule, std::size_t panels)
{
    const double c = params.speed();
    const double lam = params.rate();
    const double reach = params.radius(t);
    auto f = [&](double phi) {
        const double a = 0.5 * (reach - r * std::cos(phi));
        const double cos_alpha = std::clamp((r - reach * std::cos(phi)) / (2 * a), -1.0, 1.0);
        const double alpha = std::acos(cos_alpha);
        double acc = 0;
        for (double side : {-1.0, 1.0})
        {
            const double th_v = side * alpha;
            const double ux = r - a * std::cos(th_v);
            const double uy = -a * std::sin(th_v);
            const double th_u = std::atan2(uy, ux);
            acc += law.chi_angle(theta + th_v) * law.chi_angle(theta + th_u);
        }
        return acc;
    };
    const double integral = rule.integrate_composite(f, 0.0, pi, panels);
    return lam * std::exp(-lam * t) / (c * std::sqrt((reach - r) * (reach + r))) * integral;
}

} // namespace

//---------------------------------------------------------------------------//

double cap_open_time(const FlightParams& params, double r, double t)
{
    return 0.5 * t - 0.5 * r / params.speed();
}

double cap_full_time(const FlightParams& params, double r, double t)
{
    return 0.5 * t + 0.5 * r / params.speed();
}

IntersectionRegion classify_intersection(const FlightParams& params, double r, double theta,
                                         double t, double tau)
{
    if (!(tau > 0) || !(tau < t))
        throw std::domain_error("classify_intersection: tau outside (0, t)");
    if (!(r >= 0) || r >= params.radius(t))
        throw std::domain_error("classify_intersection: point outside the open ball");
    IntersectionRegion region{};
    region.t = t;
    region.tau = tau;
    region.center_norm = r;
    region.center_angle = theta;
    region.radius = params.speed() * (t - tau);
    region.ball_radius = params.speed() * tau;
    region.dim = params.dim();
    if (tau <= cap_open_time(params, r, t))
    {
        region.kind = RegionCase::empty;
        region.half_angle = 0;
    }
    else if (tau > cap_full_time(params, r, t))
    {
        region.kind = RegionCase::full_sphere;
        region.half_angle = pi;
    }
    else
    {
        region.kind = RegionCase::partial_cap;
        const double rho = region.radius;
        const double ball = region.ball_radius;
        // half-angle formulas avoid acos near +-1
        const double d = std::abs(r - rho);
        const double sin2 = (ball - d) * (ball + d) / (4 * r * rho);
        if (sin2 <= 0.5)
            region.half_angle = 2 * std::asin(std::sqrt(std::max(sin2, 0.0)));
        else
        {
            const double s = r + rho;
            const double cos2 = (s - ball) * (s + ball) / (4 * r * rho);
            region.half_angle = pi - 2 * std::asin(std::sqrt(std::clamp(cos2, 0.0, 1.0)));
        }
    }
    return region;
}

IntersectionRegion classify_intersection(const FlightParams& params, const EvalPoint& x,
                                         double tau)
{
    return classify_intersection(params, x.norm(), x.angle(), x.time(), tau);
}

//---------------------------------------------------------------------------//

namespace {

auto tanh_sinh_integrator(const TanhSinh& rule)
{
    return [&rule](auto&& f, double a, double b, bool, bool) { return rule.integrate(f, a, b); };
}

double surface_integral_impl(const IntersectionRegion& region, const DissipationLaw* law,
                             double weight, const SurfaceIntegrand& integrand,
                             const ConvolutionOptions& options)
{
    if (region.kind == RegionCase::empty)
        return 0;
    const TanhSinh rule(options.angle_level);
    auto integ = tanh_sinh_integrator(rule);
    const double r = region.center_norm;
    const double rho = region.radius;
    const double omega = region.half_angle;
    const double jacobian = std::pow(rho, region.dim - 1);
    if (region.dim == 2)
    {
        auto f = [&](double phi) {
            double norm, angle;
            xi_polar(r, rho, phi, norm, angle);
            const double chi = law ? law->chi_angle(region.center_angle + phi) : weight;
            return chi * integrand(norm, region.center_angle + angle);
        };
        return jacobian * (integ(f, -omega, 0.0, true, false) + integ(f, 0.0, omega, false, true));
    }
    if (law && !law->is_symmetric())
        throw std::domain_error("surface_integral: non-symmetric laws are planar only");
    const double chi = law ? symmetric_chi(*law) : weight;
    const int power = region.dim - 2;
    auto f = [&](double phi) {
        double norm, angle;
        xi_polar(r, rho, phi, norm, angle);
        return integrand(norm, 0.0) * std::pow(std::sin(phi), power);
    };
    return jacobian * chi * unit_sphere_area(region.dim - 1) * integ(f, 0.0, omega, false, true);
}

} // namespace

double surface_integral(const FlightParams& params, const DissipationLaw& law,
                        const IntersectionRegion& region, const SurfaceIntegrand& integrand,
                        const ConvolutionOptions& options)
{
    if (law.dim() != params.dim() || region.dim != params.dim())
        throw std::domain_error("surface_integral: dimensions differ");
    return surface_integral_impl(region, &law, 0, integrand, options);
}

double surface_integral(const IntersectionRegion& region, double weight,
                        const SurfaceIntegrand& integrand, const ConvolutionOptions& options)
{
    return surface_integral_impl(region, nullptr, weight, integrand, options);
}

//---------------------------------------------------------------------------//

DensityLayer seed_layer_1(const FlightParams& params, const DissipationLaw& law, double t,
                          const LayerGrid& grid, const ConvolutionOptions& options)
{
    if (std::abs(grid_time(grid) - t) > 1e-12 * t)
        throw std::domain_error("seed_layer_1: grid time differs from t");
    check_law(params, law, grid);
    std::vector<double> values;
    if (law.kind() == DissipationLaw::Kind::uniform)
    {
        values = map_nodes(grid, 1, [&](double r, double) { return f1_symmetric(params, r, t); });
    }
    else
    {
        const GaussLegendre rule(16);
        const std::size_t panels = std::max<std::size_t>(1, options.seed_points / 16);
        values = map_nodes(grid, options.threads, [&](double r, double theta) {
            return seed_node(params, law, r, theta, t, rule, panels);
        });
    }
    return DensityLayer(params, 1, grid, std::move(values), LayerKind::joint);
}

DensityLayer next_layer(const FlightParams& params, const DissipationLaw& law,
                        const DensityLayer& layer, const LayerGrid& grid,
                        const ConvolutionOptions& options)
{
    if (layer.kind() != LayerKind::joint)
        throw std::invalid_argument("next_layer: input must be a joint layer");
    check_law(params, law, grid);
    const double t = grid_time(grid);
    const bool polar = std::holds_alternative<PolarGrid>(grid);
    const TanhSinh time_rule(options.time_level);
    const TanhSinh angle_rule(options.angle_level);
    auto time_integ = tanh_sinh_integrator(time_rule);
    auto angle_integ = tanh_sinh_integrator(angle_rule);
    const double lam = params.rate();
    const int n = layer.index();
    auto weight = [&](double tau) {
        // lambda e^{-lambda (t - tau)} P_n(tau), combined in log space
        return std::exp(-lam * t + (n + 1) * std::log(lam) + n * std::log(tau)
                        - std::lgamma(n + 1.0));
    };
    auto values = map_nodes(grid, options.threads, [&](double r, double theta) {
        return propagate_node(params, law, layer.profile(), polar, r, theta, t, time_integ,
                              angle_integ, weight);
    });
    return DensityLayer(params, n + 1, grid, std::move(values), LayerKind::joint);
}

DensityLayer conditional_layer(const DensityLayer& layer, const FlightParams& params)
{
    if (layer.kind() != LayerKind::joint)
        throw std::invalid_argument("conditional_layer: input must be a joint layer");
    const double weight = poisson_weight(layer.index(), params, layer.time());
    if (!(weight > 1e-300))
        throw NumericError("conditional_layer: Poisson weight underflows");
    std::vector<double> values = layer.values();
    for (double& v : values)
        v /= weight;
    return DensityLayer(params, layer.index(), layer.grid(), std::move(values),
                        LayerKind::conditional);
}

DensityLayer next_conditional_layer(const FlightParams& params, const DissipationLaw& law,
                                    const DensityLayer& layer, const LayerGrid& grid,
                                    const ConvolutionOptions& options)
{
    if (layer.kind() != LayerKind::conditional)
        throw std::invalid_argument("next_conditional_layer: input must be conditional");
    check_law(params, law, grid);
    const double t = grid_time(grid);
    const bool polar = std::holds_alternative<PolarGrid>(grid);
    const GradedGaussLegendre rule(16, 14, 0.25);
    auto integ = [&rule](auto&& f, double a, double b, bool left, bool right) {
        return rule.integrate(f, a, b, left, right);
    };
    const int n = layer.index();
    auto weight = [&](double tau) { return (n + 1) * std::pow(tau / t, n) / t; };
    auto values = map_nodes(grid, options.threads, [&](double r, double theta) {
        return propagate_node(params, law, layer.profile(), polar, r, theta, t, integ, integ,
                              weight);
    });
    return DensityLayer(params, n + 1, grid, std::move(values), LayerKind::conditional);
}

//---------------------------------------------------------------------------//

DensityField::DensityField(const FlightParams& params, const DissipationLaw& law, double t,
                           LayerGrid grid, std::vector<DensityLayer> layers)
    : params_(params),
      law_(law),
      t_(t),
      grid_(std::move(grid)),
      singular_(params, law, t),
      layers_(std::move(layers)),
      tail_(0)
{
    if (layers_.empty())
        throw std::domain_error("DensityField: need at least one layer");
    for (std::size_t n = 0; n < layers_.size(); ++n)
    {
        if (layers_[n].index() != static_cast<int>(n + 1) || layers_[n].kind() != LayerKind::joint)
            throw std::invalid_argument("DensityField: layers must be joint and indexed 1..K");
        if (layers_[n].values().size() != radial_part(grid_).size() * angular_size(grid_))
            throw std::invalid_argument("DensityField: layer does not match the grid");
    }
    tail_ = randflight::tail_mass(max_index(), params, t);
}

double DensityField::total_mass() const
{
    double mass = singular_weight() + tail_;
    for (const auto& layer : layers_)
        mass += layer.mass();
    return mass;
}

double DensityField::ac_node(std::size_t i, std::size_t j) const
{
    double acc = 0;
    for (const auto& layer : layers_)
        acc += layer.value(i, j);
    return acc;
}

std::vector<double> DensityField::ac_values() const
{
    std::vector<double> acc(layers_.front().values().size(), 0.0);
    for (const auto& layer : layers_)
        for (std::size_t k = 0; k < acc.size(); ++k)
            acc[k] += layer.values()[k];
    return acc;
}

double DensityField::ac_value(double r, double theta) const
{
    if (!(r < params_.radius(t_)) || r < 0)
        return 0;
    double acc = 0;
    for (const auto& layer : layers_)
        acc += layer.value_at(r, theta);
    return acc;
}

DensityField transition_density(const FlightParams& params, const DissipationLaw& law, double t,
                                int max_index, const LayerGrid& grid,
                                const ConvolutionOptions& options)
{
    if (max_index < 1)
        throw std::domain_error("transition_density: truncation index must be >= 1");
    std::vector<DensityLayer> layers;
    layers.reserve(static_cast<std::size_t>(max_index));
    layers.push_back(seed_layer_1(params, law, t, grid, options));
    while (static_cast<int>(layers.size()) < max_index)
        layers.push_back(next_layer(params, law, layers.back(), grid, options));
    return DensityField(params, law, t, grid, std::move(layers));
}

double residual_check(const DensityField& field, const LayerGrid& grid,
                      const ConvolutionOptions& options)
{
    const FlightParams& params = field.params();
    const double t = field.time();
    const std::vector<double> seed =
        seed_layer_1(params, field.law(), t, grid, options).values();
    std::vector<double> rhs = seed;
    std::vector<double> lhs(seed.size(), 0.0);
    for (const auto& layer : field.layers())
    {
        const DensityLayer next = next_layer(params, field.law(), layer, grid, options);
        for (std::size_t k = 0; k < rhs.size(); ++k)
            rhs[k] += next.values()[k];
    }
    const RadialGrid& radial = radial_part(grid);
    const std::size_t n_theta = angular_size(grid);
    double worst = 0;
    for (std::size_t k = 0; k < rhs.size(); ++k)
    {
        const double r = radial[k / n_theta];
        const double theta = grid_theta(grid, k % n_theta);
        lhs[k] = field.ac_value(r, theta);
        worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
    }
    return worst;
}

} // namespace randflight
