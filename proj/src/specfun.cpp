#include "randflight/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "randflight/core.hpp"

namespace randflight {

namespace {

bool is_nonpositive_integer(double v)
{
    return v <= 0 && std::floor(v) == v;
}

// Hankel asymptotic expansion of J_nu, nu in {0, 1}, for large x.
double bessel_asymptotic(int nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double p = 1;
    double q = 0;
    double term = 1;
    const double ex = 8 * x;
    double best = 1e300;
    for (int k = 1; k < 60; ++k)
    {
        const double odd = 2.0 * k - 1;
        term *= (mu - odd * odd) / (k * ex);
        if (std::abs(term) > best)
            break;
        best = std::abs(term);
        if (k % 2 == 1)
            q += (k % 4 == 1 ? 1 : -1) * term;
        else
            p += (k % 4 == 2 ? -1 : 1) * term;
        if (best < 1e-17)
            break;
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Ascending series sum_k (-s)^k (x/2)^{2k+nu} / (k! (k+nu)!), s = +1 for J, -1 for I.
double bessel_series(int nu, double x, bool modified)
{
    const long double half = 0.5L * x;
    const long double h2 = half * half;
    long double term = nu == 0 ? 1.0L : half;
    long double sum = term;
    for (int k = 1; k < 2000; ++k)
    {
        term *= (modified ? h2 : -h2) / (static_cast<long double>(k) * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum) && k > 2)
            break;
    }
    return static_cast<double>(sum);
}

} // namespace

namespace {

// Reciprocal gamma, zero at the poles.
double rgamma(double x)
{
    return is_nonpositive_integer(x) ? 0.0 : 1 / std::tgamma(x);
}

double digamma(double x)
{
    if (x <= 0)
        return digamma(1 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    double acc = 0;
    while (x < 8)
        acc -= 1 / x++;
    const double inv = 1 / (x * x);
    return acc + std::log(x) - 0.5 / x
           - inv * (1.0 / 12 - inv * (1.0 / 120 - inv * (1.0 / 252 - inv * (1.0 / 240))));
}

double direct_series(double a, double b, double c, double z, const SeriesControl& control)
{
    double term = 1;
    double sum = 1;
    for (int k = 0; k < control.max_terms; ++k)
    {
        const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
        term *= ratio;
        sum += term;
        // once the term ratio settles below one, bound the tail geometrically
        const double next = std::abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2)) * z);
        if (next < 1)
        {
            const double tail = std::abs(term) * next / (1 - next);
            if (tail <= control.rel_tol * std::abs(sum))
                return sum;
        }
    }
    throw NumericError("gauss_2f1: series did not converge within max_terms");
}

// Expansion about z = 1 when c - a - b = n is a nonnegative integer.
double log_case(double a, double b, int n, double z, const SeriesControl& control)
{
    const double w = 1 - z;
    const double c = a + b + n;
    double finite = 0;
    if (n > 0)
    {
        double term = 1;
        for (int k = 0; k < n; ++k)
        {
            finite += term;
            term *= (a + k) * (b + k) / ((k + 1) * (1.0 - n + k)) * w;
        }
        finite *= std::tgamma(n) * std::tgamma(c) * rgamma(a + n) * rgamma(b + n);
    }
    const double lw = std::log(w);
    double coef = 1 / std::tgamma(n + 1.0);  // (a+n)_k (b+n)_k w^k / (k! (k+n)!)
    double sum = 0;
    for (int k = 0; k < control.max_terms; ++k)
    {
        const double bracket = lw - digamma(k + 1.0) - digamma(k + n + 1.0) + digamma(a + k + n)
                               + digamma(b + k + n);
        const double term = coef * bracket;
        sum += term;
        if (k > 2 && std::abs(term) <= control.rel_tol * 1e-2 * std::abs(sum))
            break;
        coef *= (a + n + k) * (b + n + k) / ((k + 1.0) * (k + n + 1.0)) * w;
    }
    const double sign = n % 2 == 0 ? 1 : -1;  // (z - 1)^n = (-w)^n
    return finite - sign * std::pow(w, n) * std::tgamma(c) * rgamma(a) * rgamma(b) * sum;
}

} // namespace

double gauss_2f1(double a, double b, double c, double z, SeriesControl control)
{
    if (!(control.rel_tol > 0) || control.max_terms < 1)
        throw std::invalid_argument("gauss_2f1: bad series control");
    if (is_nonpositive_integer(c))
        throw std::domain_error("gauss_2f1: c is a nonpositive integer");
    if (!(z >= 0) || z >= 1)
        throw std::domain_error("gauss_2f1: z outside [0, 1)");
    if (is_nonpositive_integer(a))
        std::swap(a, b);
    if (is_nonpositive_integer(b))
    {
        // Polynomial of degree -b, summed exactly
        const int degree = static_cast<int>(-b);
        double term = 1;
        double sum = 1;
        for (int k = 0; k < degree; ++k)
        {
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
            sum += term;
        }
        return sum;
    }
    if (z <= 0.9)
        return direct_series(a, b, c, z, control);

    // Near z = 1 the direct series needs O(1/(1 - z)) terms; expand in 1 - z.
    const double s = c - a - b;
    const double w = 1 - z;
    if (std::abs(s - std::round(s)) > 1e-12)
    {
        const double first = std::tgamma(c) * std::tgamma(s) * rgamma(c - a) * rgamma(c - b);
        const double second = std::tgamma(c) * std::tgamma(-s) * rgamma(a) * rgamma(b);
        double acc = 0;
        if (first != 0)
            acc += first * direct_series(a, b, 1 - s, w, control);
        if (second != 0)
            acc += second * std::pow(w, s) * direct_series(c - a, c - b, 1 + s, w, control);
        return acc;
    }
    const int n = static_cast<int>(std::round(s));
    if (n >= 0)
        return log_case(a, b, n, z, control);
    // Euler transformation moves c - a - b to -n > 0
    return std::pow(w, n) * log_case(c - a, c - b, -n, z, control);
}

double bessel_j0(double x)
{
    if (!(x >= 0))
        throw std::domain_error("bessel_j0: negative argument");
    if (x <= 12)
        return bessel_series(0, x, false);
    return bessel_asymptotic(0, x);
}

double bessel_j1(double x)
{
    if (!(x >= 0))
        throw std::domain_error("bessel_j1: negative argument");
    if (x <= 12)
        return bessel_series(1, x, false);
    return bessel_asymptotic(1, x);
}

double bessel_i0(double x)
{
    x = std::abs(x);
    if (x > 700)
        throw NumericError("bessel_i0: argument overflows");
    return bessel_series(0, x, true);
}

double bessel_i1(double x)
{
    const double ax = std::abs(x);
    if (ax > 700)
        throw NumericError("bessel_i1: argument overflows");
    const double v = bessel_series(1, ax, true);
    return x < 0 ? -v : v;
}

double gamma_half(int two_a)
{
    if (two_a < 1)
        throw std::domain_error("gamma_half: argument must be >= 1");
    double value = two_a % 2 == 0 ? 1.0 : std::sqrt(std::numbers::pi);
    for (int k = 2 - two_a % 2; k < two_a; k += 2)
        value *= 0.5 * k;
    return value;
}

} // namespace randflight
