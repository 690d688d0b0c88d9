#pragma once

#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "lspde/quadrature.hpp"

namespace lspde {

struct Atom {
    double location = 0.0;  // nonzero jump size
    double weight = 0.0;    // mass > 0
};

// coeff * |x|^{-exponent} on the open interval (lo, hi); the interval lies on one
// side of 0 and either end may be infinite.
struct PowerDensity {
    double coeff = 1.0;
    double exponent = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Piecewise-linear density through (x[i], y[i]); zero outside [x.front(), x.back()].
struct TabulatedDensity {
    std::vector<double> x;
    std::vector<double> y;
};

// One absolutely continuous part of a Levy measure. Internally everything is
// parametrized by the jump magnitude t = |x| on a single side of the origin.
class DensityPiece {
public:
    using Spec = std::variant<PowerDensity, TabulatedDensity>;

    explicit DensityPiece(Spec spec);

    const Spec& spec() const { return spec_; }
    double value(double x) const;
    int side() const { return side_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    // Kinks of the density in the magnitude coordinate.
    const std::vector<double>& t_breakpoints() const { return t_breaks_; }

    // Inverse CDF of the magnitude law restricted to t > t_min, evaluated at u in [0,1).
    double sample_magnitude(double u, double t_min) const;

private:
    Spec spec_;
    int side_ = 1;
    double t_lo_ = 0.0;
    double t_hi_ = 0.0;
    std::vector<double> t_breaks_;
};

// Half-open band of jump magnitudes: lo < |x| <= hi.
struct MagnitudeBand {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

// Levy measure nu = sum of atoms + sum of densities, with nu({0}) = 0.
// Construction validates the pieces and checks  int min(1, x^2) nu(dx) < inf.
class LevyMeasure {
public:
    LevyMeasure() = default;
    LevyMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> densities,
                const quad::Options& opt = {});

    static LevyMeasure atom(double location, double weight = 1.0);
    static LevyMeasure power(double coeff, double exponent, double lo, double hi);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& densities() const { return densities_; }
    const quad::Options& options() const { return opt_; }
    bool empty() const { return atoms_.empty() && densities_.empty(); }

    // int_{band} g(x) nu(dx), atoms summed exactly, densities by quadrature.
    quad::Integral integrate(const std::function<double(double)>& g, MagnitudeBand band) const;

    // Same restricted to density pieces only, and the density mass of each piece in band.
    quad::Integral integrate_densities(const std::function<double(double)>& g,
                                       MagnitudeBand band) const;
    quad::Integral piece_integral(const DensityPiece& piece, const std::function<double(double)>& g,
                                  MagnitudeBand band) const;

    LevyMeasure operator+(const LevyMeasure& other) const;

private:
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> densities_;
    quad::Options opt_;
};

// int min(1, x^2) nu(dx). Throws DivergentIntegral.
double min_one_x2_mass(const LevyMeasure& nu);

// int_{|r|>1} |r|^eps nu(dr); divergent sentinel when infinite.
quad::Integral epsilon_moment(const LevyMeasure& nu, double eps);

// int_{|r|>1} log(|r|)^d nu(dr); divergent sentinel when infinite.
quad::Integral log_moment(const LevyMeasure& nu, int d);

// int_{|x|<=delta} x^2 nu(dx), delta in (0, 1]. Throws DivergentIntegral.
double small_jump_variance(const LevyMeasure& nu, double delta);

struct TailStats {
    double mass = 0.0;  // nu(|x| > delta)
    double mean = 0.0;  // int_{delta<|x|<=1} x nu(dx)
};

// Throws DivergentIntegral when the tail mass is infinite.
TailStats tail_mass_and_compensator(const LevyMeasure& nu, double delta);

}  // namespace lspde
