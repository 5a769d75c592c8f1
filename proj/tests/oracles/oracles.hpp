#pragma once

// Independent reference computations for the tests. Nothing here calls
// into the library's quadrature or special functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

//! Poisson pmf by direct product, no logs.
inline double poisson_pmf(int n, double mean)
{
    double v = std::exp(-mean);
    for (int k = 1; k <= n; ++k)
        v *= mean / k;
    return v;
}

//! Raw term-by-term 2F1 series with a fixed term count.
inline double hyp2f1_raw(double a, double b, double c, double z, int terms = 20000)
{
    double term = 1;
    double sum = 1;
    for (int k = 0; k < terms; ++k)
    {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        sum += term;
    }
    return sum;
}

//! Ascending series for J_nu or I_nu (nu = 0, 1).
inline double bessel_series(int nu, double x, bool modified)
{
    const double h = 0.5 * x;
    double term = nu == 0 ? 1 : h;
    double sum = term;
    for (int k = 1; k < 300; ++k)
    {
        term *= (modified ? 1 : -1) * h * h / (k * double(k + nu));
        sum += term;
    }
    return sum;
}

//! Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4 : 2) * f(a + i * h);
    return s * h / 3;
}

/*!
 * Simpson after tau = a + (b - a)(3u^2 - 2u^3), which flattens algebraic
 * and logarithmic endpoint behaviour at both ends.
 */
inline double simpson_smoothed(const std::function<double(double)>& f, double a, double b, int n)
{
    auto g = [&](double u) {
        const double jac = (b - a) * 6 * u * (1 - u);
        if (jac == 0)
            return 0.0;
        return f(a + (b - a) * (3 * u * u - 2 * u * u * u)) * jac;
    };
    return simpson(g, 0, 1, n);
}

/*!
 * Two-turn joint density of the uniform flight in R^3.
 *
 * The inner surface integral of ln((c tau + s)/(c tau - s)) / s over the
 * sphere |xi - x| = rho, restricted to |xi| < c tau, is reduced by the
 * slice formula dS = 2 pi rho s / r ds and integrated in closed form; the
 * outer time integral is done numerically.
 */
inline double f2_r3(double r, double t, double c, double lambda, int panels = 20000)
{
    auto big_lambda = [](double a, double s) {
        // integral_0^s ln((a + u)/(a - u)) du
        const double d = a - s;
        double v = (a + s) * std::log(a + s) - 2 * a * std::log(a);
        if (d > 0)
            v += d * std::log(d);
        return v;
    };
    auto g = [&](double tau) {
        const double rho = c * (t - tau);
        const double a = c * tau;
        const double hi = std::min(r + rho, a);
        const double lo = std::abs(r - rho);
        if (hi <= lo)
            return 0.0;
        return (big_lambda(a, hi) - big_lambda(a, lo)) / (tau * (t - tau));
    };
    const double open = 0.5 * t - 0.5 * r / c;
    const double full = 0.5 * t + 0.5 * r / c;
    const double integral = simpson_smoothed(g, open, full, panels) + simpson_smoothed(g, full, t, panels);
    return lambda * lambda * std::exp(-lambda * t) / (8 * pi * c * c * c * r) * integral;
}

//! Planar n-turn layer of the uniform flight, n >= 1.
inline double planar_layer(int n, double r, double t, double c, double lambda)
{
    double fact = 1;
    for (int k = 2; k < n; ++k)
        fact *= k;
    const double gap = c * c * t * t - r * r;
    return std::pow(lambda, n) * std::exp(-lambda * t) * std::pow(gap, 0.5 * (n - 2))
           / (2 * pi * std::pow(c, n) * fact);
}

} // namespace oracle
