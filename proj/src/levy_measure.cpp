#include "lspde/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lspde/errors.hpp"

namespace lspde {

namespace {

void require(bool cond, const char* what)
{
    if (!cond) throw InvalidArgument(what);
}

}  // namespace

DensityPiece::DensityPiece(Spec spec) : spec_(std::move(spec))
{
    if (const auto* p = std::get_if<PowerDensity>(&spec_)) {
        require(std::isfinite(p->coeff) && p->coeff > 0.0, "power density: coeff must be > 0");
        require(std::isfinite(p->exponent), "power density: exponent must be finite");
        require(p->lo < p->hi, "power density: support requires lo < hi");
        require(p->lo >= 0.0 || p->hi <= 0.0, "power density: support must not straddle 0");
        side_ = p->lo >= 0.0 ? 1 : -1;
        t_lo_ = side_ > 0 ? p->lo : -p->hi;
        t_hi_ = side_ > 0 ? p->hi : -p->lo;
    } else {
        const auto& t = std::get<TabulatedDensity>(spec_);
        require(t.x.size() >= 2 && t.x.size() == t.y.size(),
                "tabulated density: need >= 2 nodes with matching x and y");
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            require(std::isfinite(t.x[i]) && std::isfinite(t.y[i]) && t.y[i] >= 0.0,
                    "tabulated density: nodes must be finite with y >= 0");
            if (i > 0) require(t.x[i] > t.x[i - 1], "tabulated density: x must increase strictly");
        }
        require(t.x.front() >= 0.0 || t.x.back() <= 0.0,
                "tabulated density: support must not straddle 0");
        side_ = t.x.front() >= 0.0 ? 1 : -1;
        t_lo_ = side_ > 0 ? t.x.front() : -t.x.back();
        t_hi_ = side_ > 0 ? t.x.back() : -t.x.front();
        for (double xi : t.x) t_breaks_.push_back(std::abs(xi));
        std::sort(t_breaks_.begin(), t_breaks_.end());
    }
}

double DensityPiece::value(double x) const
{
    if (const auto* p = std::get_if<PowerDensity>(&spec_)) {
        if (!(x > p->lo && x < p->hi)) return 0.0;
        return p->coeff * std::pow(std::abs(x), -p->exponent);
    }
    const auto& t = std::get<TabulatedDensity>(spec_);
    if (x < t.x.front() || x > t.x.back()) return 0.0;
    const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
    if (it == t.x.end()) return t.y.back();
    const auto i = static_cast<std::size_t>(it - t.x.begin());
    const double w = (x - t.x[i - 1]) / (t.x[i] - t.x[i - 1]);
    return t.y[i - 1] + w * (t.y[i] - t.y[i - 1]);
}

double DensityPiece::sample_magnitude(double u, double t_min) const
{
    const double a = std::max(t_lo_, t_min);
    if (const auto* p = std::get_if<PowerDensity>(&spec_)) {
        const double b = t_hi_;
        if (p->exponent == 1.0) return a * std::pow(b / a, u);
        const double e = 1.0 - p->exponent;
        const double fa = std::pow(a, e);
        const double fb = std::isinf(b) ? (e < 0.0 ? 0.0 : b) : std::pow(b, e);
        return std::pow(fa + u * (fb - fa), 1.0 / e);
    }
    // Magnitude-ordered nodes of the piecewise-linear density, clipped to t > a.
    const auto& t = std::get<TabulatedDensity>(spec_);
    std::vector<double> ts(t.x.size());
    std::vector<double> ys(t.y.size());
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        const std::size_t j = side_ > 0 ? i : t.x.size() - 1 - i;
        ts[i] = std::abs(t.x[j]);
        ys[i] = t.y[j];
    }
    struct Seg {
        double t0, y0, slope, mass;
    };
    std::vector<Seg> segs;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double t0 = ts[i];
        const double t1 = ts[i + 1];
        if (t1 <= a) continue;
        const double slope = (ys[i + 1] - ys[i]) / (t1 - t0);
        double y0 = ys[i];
        if (t0 < a) {
            y0 += slope * (a - t0);
            t0 = a;
        }
        const double mass = 0.5 * (y0 + ys[i + 1]) * (t1 - t0);
        segs.push_back({t0, y0, slope, mass});
        total += mass;
    }
    if (segs.empty() || !(total > 0.0)) return a;
    double m = u * total;
    for (const auto& s : segs) {
        if (m <= s.mass || &s == &segs.back()) {
            m = std::min(m, s.mass);
            // Solve y0*tau + slope*tau^2/2 = m in its cancellation-free form.
            const double disc = std::max(0.0, s.y0 * s.y0 + 2.0 * s.slope * m);
            const double denom = s.y0 + std::sqrt(disc);
            const double tau = denom > 0.0 ? 2.0 * m / denom : 0.0;
            return s.t0 + tau;
        }
        m -= s.mass;
    }
    return segs.back().t0;
}

LevyMeasure::LevyMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> densities,
                         const quad::Options& opt)
    : atoms_(std::move(atoms)), densities_(std::move(densities)), opt_(opt)
{
    for (const auto& a : atoms_) {
        require(std::isfinite(a.location) && a.location != 0.0,
                "atom location must be finite and nonzero");
        require(std::isfinite(a.weight) && a.weight > 0.0, "atom weight must be finite and > 0");
    }
    const auto mass = integrate([](double x) { return std::min(1.0, x * x); }, {});
    if (mass.divergent) {
        throw DivergentIntegral("Levy measure violates int min(1, x^2) nu(dx) < inf");
    }
}

LevyMeasure LevyMeasure::atom(double location, double weight)
{
    return LevyMeasure({Atom{location, weight}}, {});
}

LevyMeasure LevyMeasure::power(double coeff, double exponent, double lo, double hi)
{
    return LevyMeasure({}, {DensityPiece(PowerDensity{coeff, exponent, lo, hi})});
}

LevyMeasure LevyMeasure::operator+(const LevyMeasure& other) const
{
    auto atoms = atoms_;
    atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
    auto dens = densities_;
    dens.insert(dens.end(), other.densities_.begin(), other.densities_.end());
    return LevyMeasure(std::move(atoms), std::move(dens), opt_);
}

quad::Integral LevyMeasure::piece_integral(const DensityPiece& piece,
                                           const std::function<double(double)>& g,
                                           MagnitudeBand band) const
{
    // Open/closed band ends are immaterial for absolutely continuous pieces.
    const double lo = std::max(band.lo, piece.t_lo());
    const double hi = std::min(band.hi, piece.t_hi());
    if (!(hi > lo)) return {};
    const int s = piece.side();
    auto h = [&](double t) {
        const double x = s * t;
        return g(x) * piece.value(x);
    };
    return quad::integrate(h, lo, hi, opt_, piece.t_breakpoints());
}

quad::Integral LevyMeasure::integrate_densities(const std::function<double(double)>& g,
                                               MagnitudeBand band) const
{
    quad::Integral total;
    for (const auto& piece : densities_) {
        total += piece_integral(piece, g, band);
        if (total.divergent) break;
    }
    return total;
}

quad::Integral LevyMeasure::integrate(const std::function<double(double)>& g,
                                      MagnitudeBand band) const
{
    quad::Integral total;
    for (const auto& a : atoms_) {
        const double t = std::abs(a.location);
        if (t > band.lo && t <= band.hi) total.value += a.weight * g(a.location);
    }
    if (!std::isfinite(total.value)) return quad::Integral::diverged();
    return total + integrate_densities(g, band);
}

double min_one_x2_mass(const LevyMeasure& nu)
{
    const auto r = nu.integrate([](double x) { return std::min(1.0, x * x); }, {});
    if (r.divergent) throw DivergentIntegral("int min(1, x^2) nu(dx) diverges");
    return r.value;
}

quad::Integral epsilon_moment(const LevyMeasure& nu, double eps)
{
    if (!(eps > 0.0)) throw InvalidArgument("epsilon_moment: eps must be > 0");
    return nu.integrate([eps](double x) { return std::pow(std::abs(x), eps); }, {1.0});
}

quad::Integral log_moment(const LevyMeasure& nu, int d)
{
    if (d < 1) throw InvalidArgument("log_moment: d must be >= 1");
    return nu.integrate([d](double x) { return std::pow(std::log(std::abs(x)), d); }, {1.0});
}

double small_jump_variance(const LevyMeasure& nu, double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidDelta("delta must lie in (0, 1]");
    const auto r = nu.integrate([](double x) { return x * x; }, {0.0, delta});
    if (r.divergent) throw DivergentIntegral("small-jump variance diverges");
    return r.value;
}

TailStats tail_mass_and_compensator(const LevyMeasure& nu, double delta)
{
    if (!(delta > 0.0)) throw InvalidDelta("delta must be > 0");
    const auto mass = nu.integrate([](double) { return 1.0; }, {delta});
    if (mass.divergent) throw DivergentIntegral("tail mass nu(|x| > delta) is infinite");
    const auto mean = nu.integrate([](double x) { return x; }, {delta, 1.0});
    if (mean.divergent) throw DivergentIntegral("compensator integral diverges");
    return {mass.value, mean.value};
}

}  // namespace lspde
