#include "lspde/levy_noise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "lspde/defaults.hpp"
#include "lspde/errors.hpp"

namespace lspde {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// cos(y) - 1 without cancellation.
double cosm1(double y)
{
    const double s = std::sin(0.5 * y);
    return -2.0 * s * s;
}

// sin(y) - y without cancellation for small y.
double sinm(double y)
{
    if (std::abs(y) < 0.1) {
        const double y2 = y * y;
        return -y * y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0 * (1.0 - y2 / 72.0)));
    }
    return std::sin(y) - y;
}

quad::Integral require_finite(quad::Integral r)
{
    if (r.divergent) throw DivergentIntegral("jump integral of the Levy symbol diverges");
    return r;
}

double chunk(const std::function<double(double)>& f, double a, double b)
{
    return quad::adaptive(f, a, b, 1e-12, 1e-300).value;
}

// int_a^b e^{izt} (alpha + beta t) dt in closed form.
cplx linear_segment(double alpha, double beta, double z, double a, double b)
{
    const cplx iz(0.0, z);
    auto prim = [&](double t) { return std::exp(iz * t) * ((alpha + beta * t) / iz + beta / (z * z)); };
    return prim(b) - prim(a);
}

// int_X^inf coeff t^{-p} e^{izt} dt, asymptotic series to 5 terms.
cplx power_tail(double coeff, double p, double z, double X)
{
    const cplx iz(0.0, z);
    cplx sum = 0.0;
    double dk = coeff * std::pow(X, -p);  // f^{(k)}(X)
    cplx izk = iz;                        // (iz)^{k+1}
    for (int k = 0; k < 5; ++k) {
        sum -= (k % 2 == 0 ? 1.0 : -1.0) * dk / izk;
        dk *= -(p + k) / X;
        izk *= iz;
    }
    return std::exp(iz * X) * sum;
}

// int_{(1, inf) cap supp} e^{izt} f(t) dt for one piece, z > 0.
cplx oscillatory_tail(const DensityPiece& piece, double z)
{
    const double lo = std::max(1.0, piece.t_lo());
    const double hi = piece.t_hi();
    if (!(hi > lo)) return 0.0;
    const int s = piece.side();
    auto f = [&](double t) { return piece.value(s * t); };

    if (std::holds_alternative<TabulatedDensity>(piece.spec())) {
        const auto& br = piece.t_breakpoints();
        cplx total = 0.0;
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            const double a = std::max(lo, br[i]);
            const double b = br[i + 1];
            if (!(b > a)) continue;
            const double fa = f(std::nextafter(a, b));
            const double fb = f(std::nextafter(b, a));
            if (z * (b - a) > 1.0) {
                const double beta = (fb - fa) / (b - a);
                total += linear_segment(fa - beta * a, beta, z, a, b);
            } else {
                total += cplx(chunk([&](double t) { return std::cos(z * t) * f(t); }, a, b),
                              chunk([&](double t) { return std::sin(z * t) * f(t); }, a, b));
            }
        }
        return total;
    }

    const auto& pw = std::get<PowerDensity>(piece.spec());
    const double p = pw.exponent;
    const double period = kTwoPi / z;
    // Asymptotic remainder f^{(5)}(X)/z^6 below 1e-15 absolute, and X well past
    // the turning scale of the series.
    const double c5 = pw.coeff * p * (p + 1) * (p + 2) * (p + 3) * (p + 4);
    double X = std::max({lo + period, 10.0 * (p + 5.0) / z, std::pow(c5 / (1e-15 * std::pow(z, 6)), 1.0 / (p + 5.0))});
    const double max_chunks = 1e5;
    X = std::min(X, lo + max_chunks * period);
    const double end = std::min(hi, X);

    cplx total = 0.0;
    for (double a = lo; a < end;) {
        const double b = std::min(end, a + period);
        total += cplx(chunk([&](double t) { return std::cos(z * t) * f(t); }, a, b),
                      chunk([&](double t) { return std::sin(z * t) * f(t); }, a, b));
        a = b;
    }
    if (hi > X) {
        total += power_tail(pw.coeff, p, z, X);
        if (std::isfinite(hi)) total -= power_tail(pw.coeff, p, z, hi);
    }
    return total;
}

cplx jump_part(const LevyMeasure& nu, double z)
{
    cplx total = 0.0;
    for (const auto& a : nu.atoms()) {
        const double y = a.location * z;
        const double im = std::abs(a.location) <= 1.0 ? sinm(y) : std::sin(y);
        total += a.weight * cplx(cosm1(y), im);
    }
    for (const auto& piece : nu.densities()) {
        const int s = piece.side();
        // Compensated part on |x| <= 1.
        const auto re_near = require_finite(nu.piece_integral(piece, [z](double x) { return cosm1(x * z); }, {0.0, 1.0}));
        const auto im_near = require_finite(nu.piece_integral(piece, [z](double x) { return sinm(x * z); }, {0.0, 1.0}));
        total += cplx(re_near.value, im_near.value);
        if (piece.t_hi() > 1.0) {
            const auto mass = require_finite(nu.piece_integral(piece, [](double) { return 1.0; }, {1.0}));
            const cplx osc = oscillatory_tail(piece, z);
            total += cplx(osc.real() - mass.value, s * osc.imag());
        }
    }
    return total;
}

}  // namespace

void LevyTriplet::validate() const
{
    if (!(std::isfinite(a) && a >= 0.0)) throw InvalidArgument("triplet: Gaussian variance a must be >= 0");
    if (!std::isfinite(gamma)) throw InvalidArgument("triplet: drift gamma must be finite");
}

cplx levy_symbol(const LevyTriplet& triplet, double z)
{
    if (z == 0.0) return 0.0;
    if (z < 0.0) return std::conj(levy_symbol(triplet, -z));
    const cplx gauss(-0.5 * triplet.a * z * z, triplet.gamma * z);
    if (triplet.nu.empty()) return gauss;
    return gauss + jump_part(triplet.nu, z);
}

cplx characteristic_functional(const LevyTriplet& triplet, const Field& phi)
{
    if (phi.domain() != Domain::physical) throw DomainTagMismatch("characteristic_functional: phi must be physical");
    if (phi.max_abs_imag() > 1e-12 * std::max(1.0, phi.max_abs()))
        throw InvalidArgument("characteristic_functional: phi must be real-valued");
    std::map<double, cplx> cache;
    cplx sum = 0.0;
    for (const auto& v : phi.values()) {
        const double x = v.real();
        auto it = cache.find(x);
        if (it == cache.end()) it = cache.emplace(x, levy_symbol(triplet, x)).first;
        sum += it->second;
    }
    return std::exp(sum * phi.grid().cell_volume());
}

Field NoiseRealization::density() const
{
    Field f = Field::from_real(grid, cell_integrals);
    f *= 1.0 / grid.cell_volume();
    return f;
}

double NoiseRealization::pair(const Field& phi) const
{
    if (!(phi.grid() == grid)) throw DimensionMismatch("pairing: grids differ");
    double s = 0.0;
    for (std::size_t i = 0; i < cell_integrals.size(); ++i) s += phi[i].real() * cell_integrals[i];
    return s;
}

NoiseSampler::NoiseSampler(LevyTriplet triplet, double cell_volume, double delta)
    : triplet_(std::move(triplet)), delta_(delta)
{
    triplet_.validate();
    if (!(delta > 0.0 && delta <= 1.0)) throw InvalidDelta("delta must lie in (0, 1]");
    const auto& nu = triplet_.nu;
    const double var = triplet_.a + small_jump_variance(nu, delta);
    const auto tail = tail_mass_and_compensator(nu, delta);
    mean_ = cell_volume * (triplet_.gamma - tail.mean);
    sd_ = std::sqrt(cell_volume * var);
    intensity_ = cell_volume * tail.mass;

    double cum = 0.0;
    for (std::size_t i = 0; i < nu.atoms().size(); ++i) {
        const auto& a = nu.atoms()[i];
        if (std::abs(a.location) <= delta) continue;
        cum += a.weight;
        sources_.push_back({cum, static_cast<int>(i), -1});
    }
    for (std::size_t i = 0; i < nu.densities().size(); ++i) {
        const auto m = nu.piece_integral(nu.densities()[i], [](double) { return 1.0; }, {delta});
        if (m.divergent) throw DivergentIntegral("tail mass of a density piece diverges");
        if (m.value <= 0.0) continue;
        cum += m.value;
        sources_.push_back({cum, -1, static_cast<int>(i)});
    }
}

double NoiseSampler::jump(double u_pick, double u_size) const
{
    const double target = u_pick * sources_.back().cumulative;
    auto it = std::upper_bound(sources_.begin(), sources_.end(), target,
                               [](double v, const Source& s) { return v < s.cumulative; });
    if (it == sources_.end()) --it;
    if (it->atom >= 0) return triplet_.nu.atoms()[static_cast<std::size_t>(it->atom)].location;
    const auto& piece = triplet_.nu.densities()[static_cast<std::size_t>(it->piece)];
    return piece.side() * piece.sample_magnitude(u_size, delta_);
}

double NoiseSampler::draw(std::mt19937_64& rng) const
{
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    double x = mean_;
    if (sd_ > 0.0) x += sd_ * normal(rng);
    if (intensity_ > 0.0 && !sources_.empty()) {
        std::poisson_distribution<long> pois(intensity_);
        const long n = pois(rng);
        for (long j = 0; j < n; ++j) {
            const double u1 = unif(rng);
            const double u2 = unif(rng);
            x += jump(u1, u2);
        }
    }
    return x;
}

void NoiseSampler::fill(std::span<double> out, std::uint64_t seed) const
{
    std::mt19937_64 rng(seed);
    for (double& v : out) v = draw(rng);
}

NoiseRealization sample_noise(const LevyTriplet& triplet, const Grid& grid, double delta, std::uint64_t seed)
{
    const NoiseSampler sampler(triplet, grid.cell_volume(), delta);
    NoiseRealization r{grid, std::vector<double>(grid.size()), seed, triplet, delta};
    sampler.fill(r.cell_integrals, seed);
    return r;
}

WeightFunction::WeightFunction(Kind kind) : kind_(std::move(kind))
{
    if (const auto* lp = std::get_if<LogPower>(&kind_)) {
        if (!(lp->m > 0.0 && std::isfinite(lp->m))) throw InvalidArgument("LogPower weight: m must be > 0");
    } else if (const auto* pb = std::get_if<PowerBeta>(&kind_)) {
        if (!(pb->beta > 0.0 && pb->beta < 1.0)) throw InvalidArgument("PowerBeta weight: beta must lie in (0, 1)");
    } else if (!std::get<CustomWeight>(kind_).sigma) {
        throw InvalidArgument("custom weight: sigma is empty");
    }
}

double WeightFunction::sigma(double t) const
{
    if (const auto* lp = std::get_if<LogPower>(&kind_)) return lp->m * std::log1p(t);
    if (const auto* pb = std::get_if<PowerBeta>(&kind_)) return std::pow(t, pb->beta);
    return std::get<CustomWeight>(kind_).sigma(t);
}

double omega_inverse(const WeightFunction& w, double alpha)
{
    if (!(alpha > 0.0)) throw InvalidArgument("omega_inverse: alpha must be > 0");
    if (const auto* lp = std::get_if<LogPower>(&w.kind())) return std::expm1(alpha / lp->m);
    if (const auto* pb = std::get_if<PowerBeta>(&w.kind())) return std::pow(alpha, 1.0 / pb->beta);

    if (!(w.sigma(0.0) < alpha)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (w.sigma(hi) < alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw Unbounded("omega_inverse: {x : omega(x e1) < alpha} is unbounded");
    }
    while (hi - lo > defaults::bisection_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (w.sigma(mid) < alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

WeightCheck check_weight(const WeightFunction& w)
{
    WeightCheck c;
    c.zero_at_origin = std::abs(w.sigma(0.0)) <= 1e-12;
    // Log-spaced samples on [1e-6, 1e12] plus the origin.
    std::vector<double> ts{0.0};
    for (int i = 0; i <= 180; ++i) ts.push_back(std::pow(10.0, -6.0 + i * 0.1));
    std::vector<double> sv;
    for (double t : ts) sv.push_back(w.sigma(t));
    c.nondecreasing = true;
    c.concave = true;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (sv[i] < sv[i - 1]) c.nondecreasing = false;
        if (i + 1 < ts.size()) {
            // Chord slopes of a concave function do not increase.
            const double s1 = (sv[i] - sv[i - 1]) / (ts[i] - ts[i - 1]);
            const double s2 = (sv[i + 1] - sv[i]) / (ts[i + 1] - ts[i]);
            if (s2 > s1 * (1.0 + 1e-9) + 1e-12) c.concave = false;
        }
    }
    c.cauchy_integral = quad::integrate([&w](double t) { return w.sigma(t) / (1.0 + t * t); }, 0.0, HUGE_VAL);
    // Growth rate against log(1 + t), decade by decade over [1e6, 1e12].
    c.log_slope = HUGE_VAL;
    for (std::size_t i = 10; i < ts.size(); i += 10)
        if (ts[i - 10] >= 1e6 * (1.0 - 1e-9))
            c.log_slope = std::min(c.log_slope, (sv[i] - sv[i - 10]) / (std::log1p(ts[i]) - std::log1p(ts[i - 10])));
    return c;
}

namespace {

// log omega_inverse(w, alpha), finite where omega_inverse itself would overflow.
double log_omega_inverse(const WeightFunction& w, double alpha)
{
    if (const auto* lp = std::get_if<LogPower>(&w.kind())) {
        const double y = alpha / lp->m;
        return y > 30.0 ? y + std::log1p(-std::exp(-y)) : std::log(std::expm1(y));
    }
    if (const auto* pb = std::get_if<PowerBeta>(&w.kind())) return std::log(alpha) / pb->beta;
    return std::log(omega_inverse(w, alpha));
}

}  // namespace

quad::Integral ultra_inner(const WeightFunction& w, double c, int d, double R)
{
    // alpha = e^{-s}:  int_{log R}^inf omega_inverse(c s)^d e^{-s} ds.
    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        double lv = 0.0;
        try {
            lv = log_omega_inverse(w, c * s);
        } catch (const Unbounded&) {
            return HUGE_VAL;
        }
        return std::exp(d * lv - s);
    };
    return quad::integrate(f, std::log(R), HUGE_VAL);
}

quad::Integral ultra_admissibility(const LevyMeasure& nu, const WeightFunction& w, double c, int d)
{
    if (!(c > 0.0)) throw InvalidArgument("ultra_admissibility: c must be > 0");
    if (d < 1) throw InvalidArgument("ultra_admissibility: d must be >= 1");
    auto g = [&](double x) {
        const double R = std::abs(x);
        const auto inner = ultra_inner(w, c, d, R);
        return inner.divergent ? HUGE_VAL : R * inner.value;
    };
    return nu.integrate(g, {1.0});
}

double distribution_function(const Field& f, double alpha)
{
    if (!(alpha >= 0.0)) throw InvalidArgument("distribution_function: alpha must be >= 0");
    std::size_t n = 0;
    for (const auto& v : f.values())
        if (std::abs(v) > alpha) ++n;
    return static_cast<double>(n) * f.grid().cell_volume();
}

double unit_ball_volume(int dim)
{
    return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double distribution_function(const ExponentialProfile& rho, double alpha)
{
    if (!(alpha >= 0.0)) throw InvalidArgument("distribution_function: alpha must be >= 0");
    if (alpha >= rho.D) return 0.0;
    if (alpha == 0.0) return HUGE_VAL;
    const double R = std::log(rho.D / alpha) / rho.delta;
    return unit_ball_volume(rho.dim) * std::pow(R, rho.dim);
}

double distribution_function(const WeightFunction& w, double eta, int dim, double alpha)
{
    if (!(alpha >= 0.0)) throw InvalidArgument("distribution_function: alpha must be >= 0");
    if (alpha >= 1.0) return 0.0;
    if (alpha == 0.0) return HUGE_VAL;
    return unit_ball_volume(dim) * std::pow(omega_inverse(w, std::log(1.0 / alpha) / eta), dim);
}

}  // namespace lspde
