#pragma once

namespace randflight {

struct SeriesControl
{
    double rel_tol = 1e-12;
    int max_terms = 500;
};

/*!
 * Gauss hypergeometric series 2F1(a, b; c; z) for 0 <= z < 1.
 *
 * Terminating series (b a nonpositive integer) are summed as polynomials.
 * For z > 0.9 the value comes from the expansion about z = 1, including
 * the logarithmic cases where c - a - b is an integer.
 * Throws NumericError if the tail estimate is not below rel_tol after
 * max_terms terms.
 */
double gauss_2f1(double a, double b, double c, double z, SeriesControl control = {});

//! Bessel function J0 for x >= 0.
double bessel_j0(double x);

//! Bessel function J1 for x >= 0.
double bessel_j1(double x);

//! Modified Bessel function I0.
double bessel_i0(double x);

//! Modified Bessel function I1.
double bessel_i1(double x);

//! Gamma(two_a / 2) for two_a >= 1.
double gamma_half(int two_a);

} // namespace randflight
