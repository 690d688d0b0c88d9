#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "lspde/grid.hpp"
#include "lspde/levy_measure.hpp"

namespace lspde {

struct LevyTriplet {
    double a = 0.0;      // Gaussian variance
    double gamma = 0.0;  // drift
    LevyMeasure nu;

    // Throws InvalidArgument when a < 0 or a, gamma are not finite.
    void validate() const;
};

// psi(z) = i gamma z - a z^2/2 + int (e^{ixz} - 1 - ixz 1_{|x|<=1}) nu(dx).
// Throws DivergentIntegral if the jump integral cannot be certified.
cplx levy_symbol(const LevyTriplet& triplet, double z);

// exp(sum_i psi(phi(x_i)) h^d) for a real-valued physical field phi.
cplx characteristic_functional(const LevyTriplet& triplet, const Field& phi);

// Per-cell integrals of the noise. <Ldot, phi> ~ sum_i phi(x_i) cell_integrals[i].
struct NoiseRealization {
    Grid grid;
    std::vector<double> cell_integrals;
    std::uint64_t seed = 0;
    LevyTriplet triplet;
    double delta = 0.0;

    // cell_integrals / h^d as a physical field.
    Field density() const;
    double pair(const Field& phi) const;
};

// The law of one cell integral: Gaussian part (with small jumps |x| <= delta
// folded into the variance) plus compound Poisson jumps |x| > delta. The drift
// is shifted by the compensator over delta < |x| <= 1 so that the sampled law
// has characteristic function exp(h^d psi) up to the small-jump approximation.
class NoiseSampler {
public:
    NoiseSampler(LevyTriplet triplet, double cell_volume, double delta);

    double gaussian_mean() const { return mean_; }
    double gaussian_sd() const { return sd_; }
    double jump_intensity() const { return intensity_; }

    double draw(std::mt19937_64& rng) const;
    // out[i] for each cell, from a generator seeded with `seed`.
    void fill(std::span<double> out, std::uint64_t seed) const;

private:
    struct Source {
        double cumulative;  // cumulative mass up to and including this source
        int atom = -1;      // index into atoms, or -1
        int piece = -1;     // index into density pieces, or -1
    };
    double jump(double u_pick, double u_size) const;

    LevyTriplet triplet_;
    double delta_;
    double mean_ = 0.0;
    double sd_ = 0.0;
    double intensity_ = 0.0;
    std::vector<Source> sources_;
};

// Seeds replicate i with seed + i.
NoiseRealization sample_noise(const LevyTriplet& triplet, const Grid& grid, double delta,
                              std::uint64_t seed);

struct LogPower {
    double m = 1.0;  // sigma(t) = m log(1 + t)
};
struct PowerBeta {
    double beta = 0.5;  // sigma(t) = t^beta
};
struct CustomWeight {
    std::function<double(double)> sigma;
};

// omega(x) = sigma(|x|).
class WeightFunction {
public:
    using Kind = std::variant<LogPower, PowerBeta, CustomWeight>;

    explicit WeightFunction(Kind kind);

    const Kind& kind() const { return kind_; }
    double sigma(double t) const;

private:
    Kind kind_;
};

// sup{x >= 0 : sigma(x) < alpha}, 0 when the set is empty. Throws Unbounded.
double omega_inverse(const WeightFunction& w, double alpha);

// Sampled checks of the weight conditions. Not enforced by WeightFunction:
// degenerate weights remain usable in omega_inverse.
struct WeightCheck {
    bool zero_at_origin = false;
    bool nondecreasing = false;
    bool concave = false;
    quad::Integral cauchy_integral;  // int_0^inf sigma(t)/(1+t^2) dt
    double log_slope = 0.0;          // min decade increment of sigma over log(1+t), t in [1e6, 1e12]
    bool passed() const
    {
        return zero_at_origin && nondecreasing && concave && cauchy_integral.finite() && log_slope > 0.0;
    }
};

WeightCheck check_weight(const WeightFunction& w);

// int_{|r|>1} |r| int_0^{1/|r|} omega_inverse(c log(1/alpha))^d dalpha nu(dr).
quad::Integral ultra_admissibility(const LevyMeasure& nu, const WeightFunction& w, double c, int d);

// Inner integral of ultra_admissibility at |r| = R >= 1.
quad::Integral ultra_inner(const WeightFunction& w, double c, int d, double R);

// Lebesgue measure of {|f| > alpha}: counted cells times h^d.
double distribution_function(const Field& f, double alpha);

// rho(x) = D exp(-delta |x|) on R^d.
struct ExponentialProfile {
    double D = 1.0;
    double delta = 1.0;
    int dim = 1;
};
double distribution_function(const ExponentialProfile& rho, double alpha);

// rho(x) = exp(-eta omega(x)) on R^d.
double distribution_function(const WeightFunction& w, double eta, int dim, double alpha);

// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

}  // namespace lspde
