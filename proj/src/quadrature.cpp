#include "randflight/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace randflight {

GaussLegendre::GaussLegendre(std::size_t points) : nodes_(points), weights_(points)
{
    if (points == 0)
        throw std::invalid_argument("GaussLegendre: need at least one point");
    const std::size_t n = points;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i)
    {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75)
                            / (static_cast<double>(n) + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k)
            {
                const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (n == 1)
            {
                p1 = x;
                p0 = 1;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // recompute derivative at the converged node
        double p0 = 1;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k)
        {
            const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = n == 1 ? 1.0 : static_cast<double>(n) * (x * p1 - p0) / (x * x - 1);
        const double w = 2 / ((1 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        nodes_[n / 2] = 0;
}

TanhSinh::TanhSinh(int level, double t_max)
{
    if (level < 0 || level > 10 || !(t_max > 0))
        throw std::invalid_argument("TanhSinh: bad level or truncation");
    const double h = std::ldexp(1.0, -level);
    const int kmax = static_cast<int>(std::floor(t_max / h));
    constexpr double half_pi = 0.5 * std::numbers::pi;
    for (int k = -kmax; k <= kmax; ++k)
    {
        const double t = k * h;
        const double u = half_pi * std::sinh(std::abs(t));
        const double ch = std::cosh(u);
        offsets_.push_back(2 / (std::exp(2 * u) + 1));
        weights_.push_back(half_pi * h * std::cosh(t) / (ch * ch));
        sides_.push_back(k < 0 ? -1 : (k > 0 ? 1 : 0));
    }
}

GradedGaussLegendre::GradedGaussLegendre(std::size_t points, int levels, double ratio)
    : rule_(points), levels_(levels), ratio_(ratio)
{
    if (levels < 0 || !(ratio > 0 && ratio < 1))
        throw std::invalid_argument("GradedGaussLegendre: bad grading");
}

} // namespace randflight
