#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lspde/errors.hpp"
#include "lspde/linear.hpp"
#include "oracles.hpp"

using namespace lspde;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const Grid& g, std::mt19937_64& rng)
{
    std::normal_distribution<double> n01;
    std::vector<double> v(g.size());
    for (double& x : v) x = n01(rng);
    return Field::from_real(g, v);
}

// lambda + |xi|^2 raised to a power, plus a random odd first-order term.
MultiPoly random_elliptic(int d, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.5, 3.0);
    std::uniform_int_distribution<int> pw(1, 2);
    MultiPoly p = MultiPoly::helmholtz(d, u(rng)).pow(pw(rng));
    MultiIndex e(static_cast<std::size_t>(d), 0);
    e[0] = 1;
    return p + MultiPoly::monomial(e, u(rng) - 1.5);
}

LevyTriplet gaussian(double a)
{
    LevyTriplet t;
    t.a = a;
    return t;
}

// Inverse of oracle::naive_dft_1d.
std::vector<cplx> naive_idft_1d(const std::vector<cplx>& F, double L)
{
    const std::size_t n = F.size();
    const double h = L / static_cast<double>(n);
    std::vector<cplx> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -0.5 * L + static_cast<double>(j) * h;
        cplx s{};
        for (std::size_t k = 0; k < n; ++k) {
            const long ks = k < n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
            s += std::polar(1.0, 2.0 * kPi * static_cast<double>(ks) * x / L) * F[k];
        }
        out[j] = s / L;
    }
    return out;
}

// 1 - Q_KS via the theta-function form sqrt(2 pi)/lambda sum exp(-(2k-1)^2 pi^2 / (8 lambda^2)).
double oracle_kolmogorov_q(double lambda)
{
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) s += std::exp(-std::pow(2 * k - 1, 2) * kPi * kPi / (8 * lambda * lambda));
    return 1.0 - std::sqrt(2 * kPi) / lambda * s;
}

NoiseRealization with_cells(const NoiseRealization& w, std::vector<double> cells)
{
    NoiseRealization out = w;
    out.cell_integrals = std::move(cells);
    return out;
}

}  // namespace

TEST_CASE("apply_multiplier examples", "[linear]")
{
    std::mt19937_64 rng(31);
    const Grid g = Grid::cube(2, 16, 5.0);
    const Field f = random_field(g, rng);
    const MultiPoly p = random_elliptic(2, rng);
    CHECK((apply_multiplier({p, p}, f) - f).max_abs() <= 1e-12 * f.max_abs());

    const Grid g1 = Grid::cube(1, 64, 2.0 * kPi);
    const Field mode = Field::from_function(g1, [](std::span<const double> x) { return std::polar(1.0, 3.0 * x[0]); });
    const Field out = apply_multiplier({MultiPoly::constant(1, 1.0), MultiPoly::helmholtz(1, 1.0)}, mode);
    CHECK((out - cplx(0.1) * mode).max_abs() <= 1e-13);
    CHECK_THROWS_AS(apply_multiplier({p, p}, dft(f)), DomainTagMismatch);
    CHECK_THROWS_AS(apply_multiplier({p, p}, mode), DimensionMismatch);
}

TEST_CASE("apply_multiplier agrees with per-mode division", "[linear][property]")
{
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 5; ++trial) {
        const double L = 3.0 + trial;
        const Grid g = Grid::cube(1, 64, L);
        const Field f = random_field(g, rng);
        const MultiPoly p = random_elliptic(1, rng);
        const MultiPoly q = random_elliptic(1, rng);
        std::vector<cplx> F = oracle::naive_dft_1d(f.values(), L);
        for (std::size_t k = 0; k < F.size(); ++k) {
            const std::vector<double> xi{g.axis_frequencies(0)[k]};
            F[k] *= q.eval_at_i_xi(xi) / p.eval_at_i_xi(xi);
        }
        const std::vector<cplx> expect = naive_idft_1d(F, L);
        const Field got = apply_multiplier({q, p}, f);
        double err = 0.0;
        double scale = 0.0;
        for (std::size_t j = 0; j < expect.size(); ++j) {
            err = std::max(err, std::abs(got[j] - expect[j]));
            scale = std::max(scale, std::abs(expect[j]));
        }
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("real input stays real", "[linear][property]")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.5, 3.0);
    for (int d = 1; d <= 3; ++d) {
        const Grid g = Grid::cube(d, d == 3 ? 8 : 32, 6.0);
        const Field f = random_field(g, rng);
        // Even symbols are real, including at the unpaired Nyquist modes.
        const MultiPoly p = MultiPoly::helmholtz(d, u(rng)).pow(2) + MultiPoly::helmholtz(d, u(rng)) * 0.5;
        const Field s = apply_multiplier({MultiPoly::helmholtz(d, u(rng)), p}, f);
        CHECK(s.max_abs_imag() <= 1e-9 * s.max_abs());

        // Odd terms only break realness through the Nyquist modes.
        Field F = dft(f);
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::vector<int> idx(static_cast<std::size_t>(d));
            g.unravel(i, idx.data());
            for (int j = 0; j < d; ++j)
                if (idx[j] == g.shape()[j] / 2) F[i] = 0.0;
        }
        Field fr = idft(F);
        for (auto& v : fr.values()) v = v.real();
        const Field so = apply_multiplier({random_elliptic(d, rng), random_elliptic(d, rng)}, fr);
        CHECK(so.max_abs_imag() <= 1e-9 * so.max_abs());
    }
}

TEST_CASE("zero on the axis and the zero-mean gauge", "[linear]")
{
    const Grid g = Grid::cube(1, 32, 2.0 * kPi);
    std::mt19937_64 rng(34);
    const Field f = random_field(g, rng);
    // p(i xi) = 1 - xi^2 vanishes at xi = +-1.
    const MultiPoly z = MultiPoly::helmholtz(1, -1.0) * -1.0;
    try {
        apply_multiplier({MultiPoly::constant(1, 1.0), z}, f);
        FAIL("expected ZeroOnAxis");
    } catch (const ZeroOnAxis& e) {
        CHECK(std::abs(e.frequency()[0]) == 1.0);
    }
    // p(i xi) = xi^2 vanishes only at the origin.
    const MultiPoly lap = MultiPoly::monomial({2}, -1.0);
    CHECK_THROWS_AS(apply_multiplier({MultiPoly::constant(1, 1.0), lap}, f), ZeroOnAxis);
    CHECK_THROWS_AS(apply_multiplier({MultiPoly::constant(1, 1.0), z}, f, true), ZeroOnAxis);
    const Field s = apply_multiplier({MultiPoly::constant(1, 1.0), lap}, f, true);
    const Field S = dft(s);
    const Field F = dft(f);
    CHECK(std::abs(S[0]) <= 1e-13);
    for (std::size_t k = 1; k < g.size(); ++k) {
        const double xi = g.axis_frequencies(0)[k];
        CHECK(std::abs(xi * xi * S[k] - F[k]) <= 1e-10 * std::abs(F[k]) + 1e-13);
    }
}

TEST_CASE("solve_linear identity, residual and linearity", "[linear]")
{
    std::mt19937_64 rng(35);
    const Grid g = Grid::cube(2, 16, 4.0);
    LevyTriplet t = gaussian(0.7);
    t.gamma = 0.3;
    t.nu = LevyMeasure::atom(1.5, 2.0);
    const NoiseRealization w1 = sample_noise(t, g, 0.01, 1);
    const NoiseRealization w2 = sample_noise(t, g, 0.01, 2);
    const MultiPoly p = random_elliptic(2, rng);
    CHECK((solve_linear(p, p, w1) - w1.density()).max_abs() <= 1e-12 * w1.density().max_abs());

    const MultiPoly q = random_elliptic(2, rng);
    const Field s1 = solve_linear(p, q, w1);
    CHECK(spectral_residual(p, q, s1, w1.density()) <= 1e-10);

    std::vector<double> sum(w1.cell_integrals);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w2.cell_integrals[i];
    const Field lhs = solve_linear(p, q, with_cells(w1, sum));
    const Field rhs = s1 + solve_linear(p, q, w2);
    CHECK((lhs - rhs).max_abs() <= 1e-12 * lhs.max_abs());
}

TEST_CASE("solve_linear commutes with lattice shifts", "[linear][property]")
{
    std::mt19937_64 rng(36);
    const Grid g = Grid::cube(2, 16, 4.0);
    const NoiseRealization w = sample_noise(gaussian(1.0), g, 0.01, 9);
    std::uniform_int_distribution<int> sh(-20, 20);
    for (int trial = 0; trial < 5; ++trial) {
        const MultiPoly p = random_elliptic(2, rng);
        const std::vector<int> t{sh(rng), sh(rng)};
        const Field moved = w.density().shifted(t);
        std::vector<double> cells;
        for (const cplx& v : moved.values()) cells.push_back(v.real() * g.cell_volume());
        const Field a = solve_linear(p, MultiPoly::constant(2, 1.0), with_cells(w, cells));
        const Field b = solve_linear(p, MultiPoly::constant(2, 1.0), w).shifted(t);
        CHECK((a - b).max_abs() <= 1e-12 * b.max_abs());
    }
}

TEST_CASE("spectral residual over random cases", "[linear][property]")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 3;
        const Grid g = Grid::cube(d, d == 3 ? 8 : 32, 5.0);
        const MultiPoly p = random_elliptic(d, rng);
        const MultiPoly q = random_elliptic(d, rng);
        const NoiseRealization w = sample_noise(gaussian(1.0), g, 0.01, 100 + trial);
        CHECK(spectral_residual(p, q, solve_linear(p, q, w), w.density()) <= 1e-10);
    }
}

TEST_CASE("Gaussian variance spectrum", "[linear]")
{
    const Grid g = Grid::cube(1, 64, 2.0 * kPi);
    const VarianceSpectrum vs = variance_spectrum(MultiPoly::helmholtz(1, 1.0), MultiPoly::constant(1, 1.0),
                                                  gaussian(1.0), g, 0.01, 2000, 7);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xi = g.axis_frequencies(0)[k];
        CHECK(vs.theoretical[k] == Approx(1.0 / std::pow(1.0 + xi * xi, 2)).epsilon(1e-12));
        if (std::abs(xi) <= 8.0) CHECK(std::abs(vs.empirical[k] / vs.theoretical[k] - 1.0) <= 0.1);
    }
    std::ostringstream os;
    write_variance_csv(vs, os);
    CHECK(os.str().rfind("xi_1,norm,empirical,theoretical\n", 0) == 0);
    CHECK_THROWS_AS(variance_spectrum(MultiPoly::helmholtz(1, 1.0), MultiPoly::constant(1, 1.0), gaussian(1.0), g,
                                      0.01, 1, 7),
                    InvalidArgument);
}

TEST_CASE("variance spectrum with jumps", "[linear]")
{
    // Compound Poisson at 2 with weight 0.5 adds int x^2 nu = 2 to the variance.
    LevyTriplet t = gaussian(0.5);
    t.nu = LevyMeasure::atom(2.0, 0.5);
    const Grid g = Grid::cube(1, 32, 8.0);
    const VarianceSpectrum vs =
        variance_spectrum(MultiPoly::constant(1, 1.0), MultiPoly::constant(1, 1.0), t, g, 0.01, 4000, 3);
    double mean_ratio = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(vs.theoretical[k] == Approx(2.5));
        mean_ratio += vs.empirical[k] / vs.theoretical[k] / g.size();
    }
    CHECK(mean_ratio == Approx(1.0).margin(0.03));
}

TEST_CASE("Kolmogorov distribution", "[linear]")
{
    for (double lam : {0.3, 0.5, 0.8, 1.0, 1.36, 1.63, 2.5})
        CHECK(kolmogorov_q(lam) == Approx(oracle_kolmogorov_q(lam)).margin(1e-12));
    CHECK(kolmogorov_q(0.0) == 1.0);

    const KsResult same = ks_two_sample({1, 2, 3}, {1, 2, 3});
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    CHECK(ks_two_sample({1, 2, 3}, {4, 5, 6}).statistic == 1.0);
    CHECK(ks_two_sample({1, 2, 3, 4}, {3, 4, 5, 6}).statistic == Approx(0.5));
    CHECK_THROWS_AS(ks_two_sample({}, {1.0}), InvalidArgument);
}

TEST_CASE("KS p-values are roughly uniform under the null", "[linear][property]")
{
    std::mt19937_64 rng(38);
    std::normal_distribution<double> n01;
    int rejected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(300);
        std::vector<double> b(300);
        for (double& x : a) x = n01(rng);
        for (double& x : b) x = n01(rng);
        if (ks_two_sample(a, b).p_value < 0.05) ++rejected;
    }
    CHECK(rejected <= 20);
    std::vector<double> a(300);
    std::vector<double> b(300);
    for (double& x : a) x = n01(rng);
    for (double& x : b) x = n01(rng) + 0.5;
    CHECK(ks_two_sample(a, b).p_value < 1e-3);
}

TEST_CASE("stationarity test", "[linear]")
{
    const Grid g = Grid::cube(1, 64, 16.0);
    const MultiPoly p = MultiPoly::helmholtz(1, 1.0);
    const MultiPoly q = MultiPoly::constant(1, 1.0);
    const std::vector<std::vector<int>> shifts{{5}, {-17}, {32}};

    StationarityOptions opt;
    opt.n_reps = 200;
    const StationarityReport zero = stationarity_test(p, q, LevyTriplet{}, g, shifts, opt);
    CHECK(zero.passed());
    for (const auto& s : zero.shifts)
        for (const auto& t : s.tests) CHECK(t.statistic == 0.0);

    opt.n_reps = 2000;
    opt.seed = 11;
    const StationarityReport gauss = stationarity_test(p, q, gaussian(1.0), g, shifts, opt);
    REQUIRE(gauss.shifts.size() == 3);
    for (const auto& s : gauss.shifts) {
        CHECK(s.tests.size() == 5);
        CHECK(s.passing >= 4);
    }
    CHECK(gauss.passed());

    opt.perturb = [](Field& s) {
        const auto& x = s.grid().axis_coordinates(0);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += x[i];
    };
    const StationarityReport ramp = stationarity_test(p, q, gaussian(1.0), g, shifts, opt);
    CHECK_FALSE(ramp.passed());

    std::ostringstream os;
    write_stationarity_csv(gauss, os);
    CHECK(os.str().rfind("shift,test_function,statistic,p_value\n", 0) == 0);
    CHECK_THROWS_AS(stationarity_test(p, q, gaussian(1.0), g, {{1, 2}}, opt), DimensionMismatch);
}

TEST_CASE("log energy slope", "[linear]")
{
    std::vector<double> terms;
    for (int k = 0; k < 8; ++k) terms.push_back(3.0 * std::pow(2.0, -1.5 * k));
    CHECK(log_energy_slope(terms, 2, 6) == Approx(-3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(log_energy_slope(terms, 3, 3), InvalidArgument);
}
