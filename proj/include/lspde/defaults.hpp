#pragma once

// Numeric defaults shared by the library and the CLI. Every tunable that the
// command line exposes without an explicit flag falls back to a value here.

namespace lspde::defaults {

// Jump truncation level of the noise sampler.
inline constexpr double delta = 0.01;

// Picard iteration.
inline constexpr double picard_tol = 1e-8;
inline constexpr int max_iter = 200;
inline constexpr int n_probes = 64;
inline constexpr double probe_safety = 1.5;
inline constexpr double contraction_slack = 0.05;

// Moment quadrature: log-spaced panels toward 0 (and toward infinity after x -> 1/u).
inline constexpr int panel_budget = 60;
inline constexpr double quad_tol = 1e-10;

// Decay-order estimation.
inline constexpr double kappa_xi_range = 4096.0;
inline constexpr int kappa_shells = 64;
inline constexpr int kappa_directions = 8;
inline constexpr int kappa_gamma_max = 2;

// |p(i xi)| >= zero_threshold * (1 + sum |p_alpha|) on every evaluated frequency.
inline constexpr double zero_threshold = 1e-10;

// Omega inverse bisection.
inline constexpr double bisection_tol = 1e-10;

// Dyadic partition transition sharpness.
inline constexpr double partition_sharpness = 1.0;
// Relative level below which dft coefficients are treated as roundoff in Besov sums.
inline constexpr double spectral_noise_floor = 1e-14;

// Stationarity test.
inline constexpr int stationarity_reps = 2000;
inline constexpr double stationarity_alpha = 0.01;
inline constexpr int stationarity_min_pass = 4;

}  // namespace lspde::defaults
