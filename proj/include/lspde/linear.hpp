#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "lspde/besov.hpp"
#include "lspde/defaults.hpp"
#include "lspde/grid.hpp"
#include "lspde/levy_noise.hpp"
#include "lspde/poly.hpp"

namespace lspde {

// idft((q/p)(i xi) dft(f)). With zero_mean_gauge, p may vanish at xi = 0 and the
// zero mode of the result is set to 0 (outside the nonvanishing hypothesis).
// Throws ZeroOnAxis.
Field apply_multiplier(const RationalMultiplier& m, const Field& f, bool zero_mean_gauge = false);

// s with p(D) s = q(D) L, from the cell-averaged noise density.
Field solve_linear(const MultiPoly& p, const MultiPoly& q, const NoiseRealization& noise,
                   bool zero_mean_gauge = false);

// max over modes of |p s^ - q L^| / max(max |q L^|, max |p| max |s^|).
double spectral_residual(const MultiPoly& p, const MultiPoly& q, const Field& s, const Field& noise_density);

struct VarianceSpectrum {
    Grid grid;
    std::vector<double> empirical;    // per flat spectral index
    std::vector<double> theoretical;  // (a + int x^2 nu) |q/p|^2, NaN when the moment diverges
    int replicates = 0;
};

// Sample variance of s^(xi) over replicates divided by the box volume.
// Replicate i uses seed + i.
VarianceSpectrum variance_spectrum(const MultiPoly& p, const MultiPoly& q, const LevyTriplet& triplet,
                                   const Grid& grid, double delta, int n_reps, std::uint64_t seed);
// Columns xi_1..xi_d, norm, empirical, theoretical.
void write_variance_csv(const VarianceSpectrum& vs, std::ostream& os);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

// Five fixed bumps used as test functions, scaled to the box.
std::vector<Field> stationarity_test_functions(const Grid& grid);

struct ShiftReport {
    std::vector<int> shift;
    std::vector<KsResult> tests;  // one per test function
    int passing = 0;              // p-value > alpha
    bool passed = false;          // passing >= min_pass
};

struct StationarityReport {
    std::vector<ShiftReport> shifts;
    bool passed() const;
};

struct StationarityOptions {
    double delta = defaults::delta;
    int n_reps = defaults::stationarity_reps;
    std::uint64_t seed = 0;
    double alpha = defaults::stationarity_alpha;
    int min_pass = defaults::stationarity_min_pass;
    // Applied to every solution before pairing; the negative control adds a ramp here.
    std::function<void(Field&)> perturb;
};

// Compares <s, phi> (replicates seed..seed+N-1) with <s(. + t h), phi>
// (replicates seed+N..seed+2N-1) for each shift t.
StationarityReport stationarity_test(const MultiPoly& p, const MultiPoly& q, const LevyTriplet& triplet,
                                     const Grid& grid, const std::vector<std::vector<int>>& shifts,
                                     const StationarityOptions& opt);
void write_stationarity_csv(const StationarityReport& rep, std::ostream& os);

// Least-squares slope of ln(term_k^2) against k over k_lo..k_hi.
double log_energy_slope(const std::vector<double>& terms, int k_lo, int k_hi);

}  // namespace lspde
