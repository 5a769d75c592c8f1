#include "randflight/cf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "randflight/quadrature.hpp"
#include "randflight/specfun.hpp"

namespace randflight {

namespace {

constexpr double pi = std::numbers::pi;

double norm2(std::span<const double> v)
{
    double sq = 0;
    for (double c : v)
        sq += c * c;
    return std::sqrt(sq);
}

void check_alpha(const FlightParams& params, std::span<const double> alpha)
{
    if (alpha.size() != static_cast<std::size_t>(params.dim()))
        throw std::domain_error("alpha has the wrong dimension");
}

// Colatitude quadrature of the plane-wave average.
double plane_wave_quadrature(int dim, double x, int points)
{
    const GaussLegendre rule(32);
    const std::size_t panels = static_cast<std::size_t>(std::max(1, points / 32));
    auto f = [&](double phi) {
        return std::cos(x * std::cos(phi)) * std::pow(std::sin(phi), dim - 2);
    };
    return unit_sphere_area(dim - 1) / unit_sphere_area(dim)
           * rule.integrate_composite(f, 0.0, pi, panels);
}

// Laplace transform of a ladder by trapezoid with one Richardson step.
double ladder_laplace(const CFLadder& ladder, double s, std::size_t stride)
{
    const std::size_t n = ladder.steps();
    const double h = ladder.step * static_cast<double>(stride);
    double acc = 0;
    for (std::size_t j = 0; j <= n; j += stride)
    {
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        acc += w * std::exp(-s * ladder.time(j)) * ladder.values[j].real();
    }
    return acc * h;
}

} // namespace

double plane_wave_average(int dim, double x)
{
    if (dim < 2)
        throw std::domain_error("plane_wave_average: dimension must be at least 2");
    x = std::abs(x);
    if (dim == 2)
        return bessel_j0(x);
    if (dim == 3)
        return x < 1e-4 ? 1 - x * x / 6 + x * x * x * x / 120 : std::sin(x) / x;
    return plane_wave_quadrature(dim, x, 256);
}

Complex psi(const FlightParams& params, const DissipationLaw& law, std::span<const double> alpha,
            double t)
{
    check_alpha(params, alpha);
    if (!(t >= 0))
        throw std::domain_error("psi: negative time");
    if (law.kind() == DissipationLaw::Kind::uniform)
        return plane_wave_average(params.dim(), params.radius(t) * norm2(alpha));
    const double x = params.radius(t) * norm2(alpha);
    const int points = 64 + 4 * static_cast<int>(std::ceil(x + std::abs(law.concentration())));
    return psi_quadrature(params, law, alpha, t, points);
}

Complex psi_quadrature(const FlightParams& params, const DissipationLaw& law,
                       std::span<const double> alpha, double t, int points)
{
    check_alpha(params, alpha);
    if (points < 8)
        throw std::domain_error("psi_quadrature: too few points");
    const double reach = params.radius(t);
    if (params.dim() == 2)
    {
        // periodic trapezoid
        const double step = 2 * pi / points;
        Complex acc{};
        for (int j = 0; j < points; ++j)
        {
            const double th = -pi + step * j;
            const double phase = reach * (alpha[0] * std::cos(th) + alpha[1] * std::sin(th));
            acc += law.chi_angle(th) * Complex(std::cos(phase), std::sin(phase));
        }
        return acc * step;
    }
    if (!law.is_symmetric())
        throw std::domain_error("psi_quadrature: non-symmetric laws are planar only");
    return plane_wave_quadrature(params.dim(), reach * norm2(alpha), points);
}

//---------------------------------------------------------------------------//

CFLadder psi_ladder(const FlightParams& params, const DissipationLaw& law,
                    std::span<const double> alpha, double t_max, std::size_t steps)
{
    if (!(t_max > 0) || steps < 1)
        throw std::domain_error("psi_ladder: bad ladder");
    CFLadder ladder;
    ladder.step = t_max / static_cast<double>(steps);
    ladder.values.resize(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j)
        ladder.values[j] = psi(params, law, alpha, ladder.time(j));
    return ladder;
}

CFLadder jn_next(const CFLadder& psi_values, const CFLadder& previous)
{
    if (psi_values.values.size() != previous.values.size()
        || std::abs(psi_values.step - previous.step) > 1e-15 * previous.step)
        throw std::invalid_argument("jn_next: ladders differ");
    const std::size_t n = previous.steps();
    const double h = previous.step;
    const auto& p = psi_values.values;
    const auto& q = previous.values;
    CFLadder out;
    out.step = h;
    out.values.assign(n + 1, Complex{});
    for (std::size_t j = 1; j <= n; ++j)
    {
        Complex acc = 0.5 * (p[j] * q[0] + p[0] * q[j]);
        for (std::size_t i = 1; i < j; ++i)
            acc += p[j - i] * q[i];
        out.values[j] = acc * h;
    }
    return out;
}

CFLadder jn_next(const FlightParams& params, const DissipationLaw& law, const CFLadder& previous,
                 std::span<const double> alpha)
{
    return jn_next(psi_ladder(params, law, alpha, previous.t_max(), previous.steps()), previous);
}

std::vector<CFLadder> jn_ladders(const FlightParams& params, const DissipationLaw& law,
                                 std::span<const double> alpha, double t_max, std::size_t steps,
                                 int max_index)
{
    if (max_index < 0)
        throw std::domain_error("jn_ladders: negative index");
    std::vector<CFLadder> ladders;
    ladders.push_back(psi_ladder(params, law, alpha, t_max, steps));
    for (int n = 1; n <= max_index; ++n)
        ladders.push_back(jn_next(ladders.front(), ladders.back()));
    return ladders;
}

Complex cf_series(const FlightParams& params, const std::vector<CFLadder>& ladders, std::size_t j)
{
    if (ladders.empty())
        return {};
    const double t = ladders.front().time(j);
    const double lam = params.rate();
    Complex acc{};
    double weight = std::exp(-lam * t);
    for (const auto& ladder : ladders)
    {
        acc += weight * ladder.values.at(j);
        weight *= lam;
    }
    return acc;
}

CFLadder volterra_solve(const FlightParams& params, const DissipationLaw& law,
                        std::span<const double> alpha, double t_max, std::size_t steps)
{
    if (steps < 64)
        throw std::domain_error("volterra_solve: need at least 64 steps");
    const CFLadder base = psi_ladder(params, law, alpha, t_max, steps);
    const auto& p = base.values;
    const double h = base.step;
    const double lam = params.rate();
    // Product trapezoid: e^{-lambda s} integrated exactly against the
    // linear interpolant of psi(t - tau) G(tau) on each panel.
    const double mu = lam * h;
    const double whole = -std::expm1(-mu) / lam;
    const double ramp = (-std::expm1(-mu) - mu * std::exp(-mu)) / (lam * mu);
    const double w_near = whole - ramp;
    const double w_far = ramp;
    std::vector<double> decay(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        decay[k] = std::exp(-lam * base.time(k));
    CFLadder g;
    g.step = h;
    g.values.resize(steps + 1);
    g.values[0] = p[0];
    const Complex diag = 1.0 - lam * w_near * p[0];
    for (std::size_t j = 1; j <= steps; ++j)
    {
        // panel [t_{j-1}, t_j] holds the unknown G_j
        Complex acc = w_far * p[1] * g.values[j - 1];
        for (std::size_t i = 0; i + 1 < j; ++i)
        {
            const std::size_t k = j - i - 1;
            acc += decay[k] * (w_near * p[k] * g.values[i + 1] + w_far * p[k + 1] * g.values[i]);
        }
        g.values[j] = (decay[j] * p[j] + lam * acc) / diag;
    }
    return g;
}

LaplaceReport laplace_report(const FlightParams& params, const DissipationLaw& law,
                             std::span<const double> alpha, std::span<const double> s_values,
                             double t_max, std::size_t steps, double tail_tolerance)
{
    if (steps % 2 != 0)
        throw std::domain_error("laplace_report: steps must be even");
    for (double s : s_values)
        if (!(s > 0))
            throw std::domain_error("laplace_report: s must be positive");
    const CFLadder g = volterra_solve(params, law, alpha, t_max, steps);
    const double lam = params.rate();
    const double a = norm2(alpha);
    const bool closed = law.kind() == DissipationLaw::Kind::uniform && params.dim() == 2;
    const TanhSinh rule(7);

    LaplaceReport report;
    for (double s : s_values)
    {
        LaplacePoint pt{};
        pt.s = s;
        pt.tail_bound = std::exp(-s * t_max) / s;
        // trapezoid error is O(h^2); one Richardson step
        const double fine = ladder_laplace(g, s, 1);
        const double coarse = ladder_laplace(g, s, 2);
        pt.transform = (4 * fine - coarse) / 3;
        if (pt.tail_bound > tail_tolerance * std::abs(pt.transform))
            throw NumericError("laplace_check: tail bound " + std::to_string(pt.tail_bound)
                               + " at s = " + std::to_string(s) + " exceeds tolerance; raise t_max");

        // psi transform at s + lambda over [0, inf) mapped onto (0, 1)
        const double sl = s + lam;
        auto f = [&](double u) {
            const double tau = u / (1 - u);
            const double jac = 1 / ((1 - u) * (1 - u));
            return std::exp(-sl * tau) * psi(params, law, alpha, tau).real() * jac;
        };
        const double lpsi = rule.integrate(f, 0.0, 1.0);
        pt.predicted = lpsi / (1 - lam * lpsi);
        pt.closed_form = std::numeric_limits<double>::quiet_NaN();
        double reference = pt.predicted;
        if (closed)
        {
            const double c = params.speed();
            const double lj = 1 / std::sqrt(sl * sl + c * c * a * a);
            pt.closed_form = lj / (1 - lam * lj);
            reference = pt.closed_form;
        }
        const double err = std::abs(pt.transform - reference) / std::abs(reference);
        report.max_relative_error = std::max(report.max_relative_error, err);
        report.points.push_back(pt);
    }
    return report;
}

double laplace_check(const FlightParams& params, const DissipationLaw& law,
                     std::span<const double> alpha, std::span<const double> s_values,
                     double t_max, std::size_t steps)
{
    return laplace_report(params, law, alpha, s_values, t_max, steps).max_relative_error;
}

Complex fourier_of_layer(const DensityLayer& layer, std::span<const double> alpha)
{
    if (layer.kind() != LayerKind::joint)
        throw std::invalid_argument("fourier_of_layer: input must be a joint layer");
    const FlightParams& params = layer.params();
    check_alpha(params, alpha);
    const double t = layer.time();
    const double reach = params.radius(t);
    const double weight = layer.time_weight(t);
    const LayerProfile& profile = layer.profile();
    if (!profile.is_polar())
    {
        const double x = reach * norm2(alpha);
        const int m = params.dim();
        auto kernel = [&](double z, double) { return plane_wave_average(m, x * z); };
        return weight * profile.integrate(kernel);
    }
    auto kernel = [&](double z, double th) {
        const double phase = reach * z * (alpha[0] * std::cos(th) + alpha[1] * std::sin(th));
        return Complex(std::cos(phase), std::sin(phase));
    };
    return weight * profile.integrate(kernel);
}

} // namespace randflight
