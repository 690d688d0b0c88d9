#pragma once

// Test-only reference computations. Nothing here calls into the library's
// quadrature or transform code paths.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

// Double-exponential quadrature on a finite interval.
template <class F>
double finite(F f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b);
}

// Double-exponential quadrature on [a, inf).
template <class F>
double half_line(F f, double a)
{
    boost::math::quadrature::exp_sinh<double> q;
    return q.integrate([&](double t) { return f(a + t); }, 0.0, std::numeric_limits<double>::infinity());
}

// Direct O(N^2) continuum-normalized DFT on a 1-d periodic grid with nodes
// x_j = -L/2 + j h; frequency index k maps to 2 pi k'/L, k' in [-n/2, n/2).
inline std::vector<std::complex<double>> naive_dft_1d(const std::vector<std::complex<double>>& f, double L)
{
    const std::size_t n = f.size();
    const double h = L / static_cast<double>(n);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long ks = k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
        const double xi = 2.0 * std::numbers::pi * static_cast<double>(ks) / L;
        std::complex<double> s{};
        for (std::size_t j = 0; j < n; ++j) {
            const double x = -0.5 * L + static_cast<double>(j) * h;
            s += std::polar(1.0, -xi * x) * f[j];
        }
        out[k] = h * s;
    }
    return out;
}

// Sample mean / standard error helper.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs)
{
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size() - 1);
    return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace oracle
