#pragma once

// Adaptive Gauss-Kronrod quadrature with log-spaced panels for integrands that
// may be singular at 0 or extend to infinity. Divergence is reported as a
// value, not an exception: it is a legitimate answer when checking moment
// conditions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "lspde/defaults.hpp"

namespace lspde::quad {

struct Integral {
    double value = 0.0;
    bool divergent = false;

    bool finite() const { return !divergent; }
    static Integral diverged() { return {std::numeric_limits<double>::infinity(), true}; }

    Integral& operator+=(const Integral& o)
    {
        if (o.divergent || divergent) {
            *this = diverged();
        } else {
            value += o.value;
        }
        return *this;
    }
    friend Integral operator+(Integral a, const Integral& b) { return a += b; }
};

struct Options {
    int panel_budget = defaults::panel_budget;
    double tol = defaults::quad_tol;
    // Subdivision limit of the adaptive rule inside one panel.
    int max_intervals = 2000;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

// One 15-point Kronrod panel; err is |K15 - G7|.
template <class F>
double gk15(const F& f, double a, double b, double& err)
{
    using namespace detail;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = fc * kWgk[7];
    double g7 = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        k15 += kWgk[j] * s;
        if (j % 2 == 1) g7 += kWg[j / 2] * s;
    }
    err = std::abs((k15 - g7) * h);
    return k15 * h;
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

// Globally adaptive bisection on [a, b] (finite). Splits the panel with the
// largest error estimate until the total error meets max(abs_tol, rel_tol*|I|).
template <class F>
AdaptiveResult adaptive(const F& f, double a, double b, double rel_tol, double abs_tol,
                        int max_intervals = 2000)
{
    struct Seg {
        double a, b, value, err;
    };
    std::vector<Seg> segs;
    segs.reserve(64);
    double err0 = 0.0;
    const double v0 = gk15(f, a, b, err0);
    segs.push_back({a, b, v0, err0});
    double total = v0;
    double total_err = err0;
    auto worst = [&segs] {
        return std::max_element(segs.begin(), segs.end(),
                                [](const Seg& x, const Seg& y) { return x.err < y.err; });
    };
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (!std::isfinite(total)) return {total, total_err, false};
        if (static_cast<int>(segs.size()) >= max_intervals) return {total, total_err, false};
        auto it = worst();
        const Seg s = *it;
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) return {total, total_err, false};
        double el = 0.0;
        double er = 0.0;
        const double vl = gk15(f, s.a, mid, el);
        const double vr = gk15(f, mid, s.b, er);
        *it = {s.a, mid, vl, el};
        segs.push_back({mid, s.b, vr, er});
        total += vl + vr - s.value;
        total_err += el + er - s.err;
    }
    // Final value is re-summed so that the incremental updates leave no residue.
    total = 0.0;
    for (const auto& g : segs) total += g.value;
    return {total, total_err, true};
}

// Integral over (0, b] on panels [b 16^{-k-1}, b 16^{-k}]. Stops when a panel
// contribution is negligible, or when the panel sums decay geometrically with a
// stable ratio q < 1 and the extrapolated remainder c q/(1-q) is pinned down
// to tolerance. Declares divergence when the panel budget runs out.
template <class F>
Integral integrate_to_zero(const F& f, double b, const Options& opt = {})
{
    if (!(b > 0.0)) return {0.0, false};
    double sum = 0.0;
    double hi = b;
    double c_prev = 0.0;
    double c_prev2 = 0.0;
    for (int k = 0; k < opt.panel_budget; ++k) {
        const double lo = hi / 16.0;
        const auto r = adaptive(f, lo, hi, 0.01 * opt.tol, 0.0, opt.max_intervals);
        const double c = r.value;
        if (!std::isfinite(c)) return Integral::diverged();
        sum += c;
        if (!std::isfinite(sum)) return Integral::diverged();
        if (k >= 3) {
            const double scale = std::abs(sum);
            if (std::abs(c) <= opt.tol * scale || (c == 0.0 && c_prev == 0.0)) {
                return {sum, false};
            }
            if (c_prev != 0.0 && c_prev2 != 0.0) {
                const double q1 = c / c_prev;
                const double q2 = c_prev / c_prev2;
                if (q1 > 0.0 && q2 > 0.0 && q1 < 1.0 - 1e-3) {
                    const double tail = c * q1 / (1.0 - q1);
                    const double spread = std::abs(c) * std::abs(q1 - q2) / ((1.0 - q1) * (1.0 - q1));
                    if (spread <= opt.tol * std::abs(sum + tail)) return {sum + tail, false};
                }
            }
        }
        c_prev2 = c_prev;
        c_prev = c;
        hi = lo;
    }
    return Integral::diverged();
}

// Integral over [a, inf) for a > 0 via x = 1/u, which maps the tail onto a
// neighbourhood of u = 0 handled by integrate_to_zero.
template <class F>
Integral integrate_to_infinity(const F& f, double a, const Options& opt = {})
{
    auto g = [&f](double u) {
        const double x = 1.0 / u;
        return f(x) * x * x;
    };
    return integrate_to_zero(g, 1.0 / a, opt);
}

// Integral over (a, b) with 0 <= a < b <= inf. The range is split at 1 and at
// the supplied interior breakpoints (kinks of the integrand).
template <class F>
Integral integrate(const F& f, double a, double b, const Options& opt = {},
                   const std::vector<double>& breakpoints = {})
{
    if (!(b > a)) return {0.0, false};
    std::vector<double> pts{a};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    if (1.0 > a && 1.0 < b) pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.push_back(b);

    Integral total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = pts[i + 1];
        if (std::isinf(hi)) {
            total += integrate_to_infinity(f, lo, opt);
        } else if (lo == 0.0) {
            total += integrate_to_zero(f, hi, opt);
        } else {
            const auto r = adaptive(f, lo, hi, 0.01 * opt.tol, 1e-300, opt.max_intervals);
            if (!std::isfinite(r.value)) return Integral::diverged();
            total += Integral{r.value, false};
        }
        if (total.divergent) return total;
    }
    return total;
}

}  // namespace lspde::quad
