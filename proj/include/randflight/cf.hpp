#pragma once

#include <complex>
#include <span>
#include <vector>

#include "randflight/core.hpp"
#include "randflight/dissipation.hpp"

namespace randflight {

using Complex = std::complex<double>;

//! Average of e^{i x u_1} over the uniform unit sphere in R^dim.
double plane_wave_average(int dim, double x);

//! Characteristic function of the sphere density at time t.
Complex psi(const FlightParams& params, const DissipationLaw& law, std::span<const double> alpha,
            double t);

//! Same by direct angular quadrature, no closed forms.
Complex psi_quadrature(const FlightParams& params, const DissipationLaw& law,
                       std::span<const double> alpha, double t, int points = 256);

//! Values on t_j = j * step, j = 0..steps.
struct CFLadder
{
    double step = 0;
    std::vector<Complex> values;

    std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
    double time(std::size_t j) const { return step * static_cast<double>(j); }
    double t_max() const { return time(steps()); }
};

CFLadder psi_ladder(const FlightParams& params, const DissipationLaw& law,
                    std::span<const double> alpha, double t_max, std::size_t steps);

//! Trapezoid time convolution of psi with the previous ladder.
CFLadder jn_next(const CFLadder& psi_values, const CFLadder& previous);
CFLadder jn_next(const FlightParams& params, const DissipationLaw& law, const CFLadder& previous,
                 std::span<const double> alpha);

//! Ladders J_0 = psi, ..., J_{max_index}.
std::vector<CFLadder> jn_ladders(const FlightParams& params, const DissipationLaw& law,
                                 std::span<const double> alpha, double t_max, std::size_t steps,
                                 int max_index);

//! Truncated series sum_n lambda^n e^{-lambda t} J_n(t) at ladder index j.
Complex cf_series(const FlightParams& params, const std::vector<CFLadder>& ladders,
                  std::size_t j);

//! Trapezoid marching solution of the renewal equation for the full CF.
CFLadder volterra_solve(const FlightParams& params, const DissipationLaw& law,
                        std::span<const double> alpha, double t_max, std::size_t steps);

struct LaplacePoint
{
    double s;
    double transform;      //!< transform of the Volterra solution
    double predicted;      //!< from the psi transform by quadrature
    double closed_form;    //!< NaN unless the uniform planar formula applies
    double tail_bound;
};

struct LaplaceReport
{
    std::vector<LaplacePoint> points;
    double max_relative_error = 0;
};

/*!
 * Compares the Laplace transform of the Volterra solution with
 * L[psi](s + lambda) / (1 - lambda L[psi](s + lambda)). The reference uses
 * the closed form transform when available, otherwise quadrature. Throws
 * NumericError when the truncation tail exceeds tail_tolerance.
 */
LaplaceReport laplace_report(const FlightParams& params, const DissipationLaw& law,
                             std::span<const double> alpha, std::span<const double> s_values,
                             double t_max = 40, std::size_t steps = 16384,
                             double tail_tolerance = 1e-6);

double laplace_check(const FlightParams& params, const DissipationLaw& law,
                     std::span<const double> alpha, std::span<const double> s_values,
                     double t_max = 40, std::size_t steps = 16384);

//! Fourier transform of a grid layer at time layer.time().
Complex fourier_of_layer(const DensityLayer& layer, std::span<const double> alpha);

} // namespace randflight
