#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace randflight {

//! Gauss–Legendre rule on [-1, 1].
class GaussLegendre
{
  public:
    explicit GaussLegendre(std::size_t points);

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    template<class F>
    auto integrate(F&& f, double a, double b) const -> decltype(f(a))
    {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        decltype(f(a)) acc{};
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            acc += weights_[i] * f(mid + half * nodes_[i]);
        return acc * half;
    }

    //! Composite rule over `panels` equal panels.
    template<class F>
    auto integrate_composite(F&& f, double a, double b, std::size_t panels) const
        -> decltype(f(a))
    {
        const double width = (b - a) / static_cast<double>(panels);
        decltype(f(a)) acc{};
        for (std::size_t p = 0; p < panels; ++p)
        {
            const double lo = a + width * static_cast<double>(p);
            acc += integrate(f, lo, p + 1 == panels ? b : lo + width);
        }
        return acc;
    }

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/*!
 * Tanh–sinh (double exponential) rule.
 *
 * Nodes cluster doubly exponentially at both endpoints, so integrable
 * algebraic or logarithmic endpoint singularities converge at nearly the
 * same rate as smooth integrands. Nodes that round onto an endpoint are
 * skipped; the integrand is never evaluated at a or b.
 */
class TanhSinh
{
  public:
    //! Step h = 2^-level, abscissae truncated at |kh| <= t_max.
    explicit TanhSinh(int level = 4, double t_max = 3.5);

    std::size_t size() const noexcept { return offsets_.size(); }

    template<class F>
    auto integrate(F&& f, double a, double b) const -> decltype(f(a))
    {
        decltype(f(a)) acc{};
        if (!(b > a))
            return acc;
        const double half = 0.5 * (b - a);
        for (std::size_t i = 0; i < offsets_.size(); ++i)
        {
            // offsets_ holds 1 - |x_k| exactly, keeping precision at the ends
            const double d = half * offsets_[i];
            const double x = sides_[i] < 0 ? a + d : (sides_[i] > 0 ? b - d : a + half);
            if (x <= a || x >= b)
                continue;
            acc += weights_[i] * f(x);
        }
        return acc * half;
    }

  private:
    std::vector<double> offsets_;
    std::vector<double> weights_;
    std::vector<int> sides_;
};

/*!
 * Composite Gauss–Legendre with panels graded geometrically toward the
 * flagged endpoints.
 */
class GradedGaussLegendre
{
  public:
    GradedGaussLegendre(std::size_t points = 16, int levels = 14, double ratio = 0.25);

    template<class F>
    auto integrate(F&& f, double a, double b, bool grade_left, bool grade_right) const
        -> decltype(f(a))
    {
        decltype(f(a)) acc{};
        if (!(b > a))
            return acc;
        if (grade_left && grade_right)
        {
            const double mid = 0.5 * (a + b);
            return integrate(f, a, mid, true, false) + integrate(f, mid, b, false, true);
        }
        if (!grade_left && !grade_right)
            return rule_.integrate_composite(f, a, b, 2);
        const double len = b - a;
        double outer = len;
        for (int k = 0; k < levels_; ++k)
        {
            const double inner = outer * ratio_;
            acc += grade_left ? rule_.integrate(f, a + inner, a + outer)
                              : rule_.integrate(f, b - outer, b - inner);
            outer = inner;
        }
        acc += grade_left ? rule_.integrate(f, a, a + outer) : rule_.integrate(f, b - outer, b);
        return acc;
    }

  private:
    GaussLegendre rule_;
    int levels_;
    double ratio_;
};

} // namespace randflight
