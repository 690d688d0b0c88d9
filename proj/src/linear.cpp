#include "lspde/linear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "lspde/errors.hpp"
#include "lspde/text.hpp"

namespace lspde {

namespace {

bool is_origin(const std::vector<double>& xi)
{
    return std::all_of(xi.begin(), xi.end(), [](double v) { return v == 0.0; });
}

// (q/p)(i xi) on every spectral index.
std::vector<cplx> symbol_table(const RationalMultiplier& m, const Grid& g, bool zero_mean_gauge)
{
    if (m.p.dim() != g.dim() || m.q.dim() != g.dim())
        throw DimensionMismatch("multiplier dimension does not match the grid");
    const double thr = vanishing_threshold(m.p);
    std::vector<cplx> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::vector<double> xi = g.frequency(i);
        const cplx pv = m.p.eval_at_i_xi(xi);
        if (std::abs(pv) < thr) {
            if (zero_mean_gauge && is_origin(xi)) {
                out[i] = 0.0;
                continue;
            }
            throw ZeroOnAxis(xi, std::abs(pv));
        }
        out[i] = m.q.eval_at_i_xi(xi) / pv;
    }
    return out;
}

double pairing(const Field& s, const Field& phi)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s[i].real() * phi[i].real();
    return acc * s.grid().cell_volume();
}

}  // namespace

Field apply_multiplier(const RationalMultiplier& m, const Field& f, bool zero_mean_gauge)
{
    if (f.domain() != Domain::physical) throw DomainTagMismatch("apply_multiplier expects a physical field");
    const std::vector<cplx> sym = symbol_table(m, f.grid(), zero_mean_gauge);
    Field F = dft(f);
    for (std::size_t i = 0; i < F.size(); ++i) F[i] *= sym[i];
    return idft(F);
}

Field solve_linear(const MultiPoly& p, const MultiPoly& q, const NoiseRealization& noise, bool zero_mean_gauge)
{
    return apply_multiplier({q, p}, noise.density(), zero_mean_gauge);
}

double spectral_residual(const MultiPoly& p, const MultiPoly& q, const Field& s, const Field& noise_density)
{
    const Field S = dft(s);
    const Field L = dft(noise_density);
    const Grid& g = S.grid();
    std::vector<cplx> lhs(g.size());
    std::vector<cplx> rhs(g.size());
    double p_max = 0.0;
    double s_max = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::vector<double> xi = g.frequency(i);
        const cplx pv = p.eval_at_i_xi(xi);
        lhs[i] = pv * S[i];
        rhs[i] = q.eval_at_i_xi(xi) * L[i];
        p_max = std::max(p_max, std::abs(pv));
        s_max = std::max(s_max, std::abs(S[i]));
        scale = std::max(scale, std::abs(rhs[i]));
    }
    // Transform roundoff in s^ reaches every mode with a factor up to max |p|, so
    // modes are judged against the problem scale rather than their own size.
    scale = std::max(scale, p_max * s_max);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    if (scale == 0.0) return worst == 0.0 ? 0.0 : HUGE_VAL;
    return worst / scale;
}

VarianceSpectrum variance_spectrum(const MultiPoly& p, const MultiPoly& q, const LevyTriplet& triplet,
                                   const Grid& grid, double delta, int n_reps, std::uint64_t seed)
{
    if (n_reps < 2) throw InvalidArgument("variance_spectrum needs at least 2 replicates");
    const std::vector<cplx> sym = symbol_table({q, p}, grid, false);
    const std::size_t n = grid.size();
    std::vector<cplx> mean(n);
    std::vector<double> sq(n);
    for (int r = 0; r < n_reps; ++r) {
        const NoiseRealization w = sample_noise(triplet, grid, delta, seed + static_cast<std::uint64_t>(r));
        const Field L = dft(w.density());
        for (std::size_t i = 0; i < n; ++i) {
            const cplx v = sym[i] * L[i];
            mean[i] += v;
            sq[i] += std::norm(v);
        }
    }
    VarianceSpectrum out;
    out.grid = grid;
    out.replicates = n_reps;
    const quad::Integral m2 = triplet.nu.integrate([](double x) { return x * x; }, {});
    const double total = m2.divergent ? std::numeric_limits<double>::quiet_NaN() : triplet.a + m2.value;
    const double vol = grid.box_volume();
    for (std::size_t i = 0; i < n; ++i) {
        const double N = n_reps;
        const double var = (sq[i] - std::norm(mean[i]) / N) / (N - 1.0);
        out.empirical.push_back(var / vol);
        out.theoretical.push_back(total * std::norm(sym[i]));
    }
    return out;
}

void write_variance_csv(const VarianceSpectrum& vs, std::ostream& os)
{
    for (int j = 0; j < vs.grid.dim(); ++j) os << "xi_" << j + 1 << ',';
    os << "norm,empirical,theoretical\n";
    for (std::size_t i = 0; i < vs.grid.size(); ++i) {
        for (double x : vs.grid.frequency(i)) os << format_real(x) << ',';
        os << format_real(vs.grid.frequency_norm(i)) << ',' << format_real(vs.empirical[i]) << ','
           << format_real(vs.theoretical[i]) << '\n';
    }
}

double kolmogorov_q(double lambda)
{
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

std::vector<Field> stationarity_test_functions(const Grid& grid)
{
    struct Bump {
        double center;  // fraction of the box along every axis
        double width;   // fraction of the box
        double wave;    // cosine modulation along axis 1, cycles per box
    };
    const Bump bumps[] = {{0.0, 1.0 / 16, 0.0}, {0.1, 1.0 / 10, 0.0}, {-0.15, 1.0 / 24, 0.0},
                          {0.05, 1.0 / 12, 4.0}, {-0.2, 1.0 / 8, 1.0}};
    std::vector<Field> out;
    for (const Bump& b : bumps) {
        out.push_back(Field::from_function(grid, [&](std::span<const double> x) {
            double e = 0.0;
            for (int j = 0; j < grid.dim(); ++j) {
                const double L = grid.box()[j];
                const double z = (x[j] - b.center * L) / (b.width * L);
                e += z * z;
            }
            const double mod = std::cos(2.0 * std::numbers::pi * b.wave * x[0] / grid.box()[0]);
            return cplx(std::exp(-0.5 * e) * mod);
        }));
    }
    return out;
}

bool StationarityReport::passed() const
{
    return std::all_of(shifts.begin(), shifts.end(), [](const ShiftReport& s) { return s.passed; });
}

StationarityReport stationarity_test(const MultiPoly& p, const MultiPoly& q, const LevyTriplet& triplet,
                                     const Grid& grid, const std::vector<std::vector<int>>& shifts,
                                     const StationarityOptions& opt)
{
    if (opt.n_reps < 1) throw InvalidArgument("stationarity_test needs at least 1 replicate");
    for (const auto& t : shifts)
        if (static_cast<int>(t.size()) != grid.dim()) throw DimensionMismatch("shift rank does not match the grid");
    const std::vector<cplx> sym = symbol_table({q, p}, grid, false);
    const std::vector<Field> phis = stationarity_test_functions(grid);
    const std::uint64_t N = static_cast<std::uint64_t>(opt.n_reps);

    auto solve = [&](std::uint64_t seed) {
        Field F = dft(sample_noise(triplet, grid, opt.delta, seed).density());
        for (std::size_t i = 0; i < F.size(); ++i) F[i] *= sym[i];
        Field s = idft(F);
        if (opt.perturb) opt.perturb(s);
        return s;
    };

    // base[f][r] = <s_r, phi_f> on the first replicate batch.
    std::vector<std::vector<double>> base(phis.size());
    for (std::uint64_t r = 0; r < N; ++r) {
        const Field s = solve(opt.seed + r);
        for (std::size_t f = 0; f < phis.size(); ++f) base[f].push_back(pairing(s, phis[f]));
    }
    std::vector<Field> second;
    second.reserve(N);
    for (std::uint64_t r = 0; r < N; ++r) second.push_back(solve(opt.seed + N + r));

    StationarityReport rep;
    for (const auto& t : shifts) {
        ShiftReport sr;
        sr.shift = t;
        std::vector<std::vector<double>> moved(phis.size());
        for (const Field& s : second) {
            const Field st = s.shifted(t);
            for (std::size_t f = 0; f < phis.size(); ++f) moved[f].push_back(pairing(st, phis[f]));
        }
        for (std::size_t f = 0; f < phis.size(); ++f) {
            sr.tests.push_back(ks_two_sample(base[f], moved[f]));
            if (sr.tests.back().p_value > opt.alpha) ++sr.passing;
        }
        sr.passed = sr.passing >= opt.min_pass;
        rep.shifts.push_back(std::move(sr));
    }
    return rep;
}

void write_stationarity_csv(const StationarityReport& rep, std::ostream& os)
{
    os << "shift,test_function,statistic,p_value\n";
    for (const auto& s : rep.shifts) {
        std::string label;
        for (std::size_t j = 0; j < s.shift.size(); ++j) label += (j ? ":" : "") + std::to_string(s.shift[j]);
        for (std::size_t f = 0; f < s.tests.size(); ++f)
            os << label << ',' << f << ',' << format_real(s.tests[f].statistic) << ','
               << format_real(s.tests[f].p_value) << '\n';
    }
}

double log_energy_slope(const std::vector<double>& terms, int k_lo, int k_hi)
{
    if (k_lo < 0 || k_hi >= static_cast<int>(terms.size()) || k_hi - k_lo < 1)
        throw InvalidArgument("log_energy_slope needs at least two blocks inside the range");
    double mx = 0.0;
    double my = 0.0;
    const int n = k_hi - k_lo + 1;
    for (int k = k_lo; k <= k_hi; ++k) {
        mx += k;
        my += 2.0 * std::log(terms[k]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        sxy += (k - mx) * (2.0 * std::log(terms[k]) - my);
        sxx += (k - mx) * (k - mx);
    }
    return sxy / sxx;
}

}  // namespace lspde
