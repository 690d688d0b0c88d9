#pragma once

#include <map>
#include <span>
#include <vector>

#include "lspde/defaults.hpp"
#include "lspde/grid.hpp"

namespace lspde {

using MultiIndex = std::vector<int>;

// Real polynomial p(z) = sum_alpha p_alpha z^alpha in d variables.
class MultiPoly {
public:
    explicit MultiPoly(int dim = 1);
    MultiPoly(int dim, std::map<MultiIndex, double> terms);

    static MultiPoly constant(int dim, double c);
    static MultiPoly monomial(MultiIndex alpha, double coeff = 1.0);
    // lambda - sum_j z_j^2, so that p(i xi) = lambda + |xi|^2.
    static MultiPoly helmholtz(int dim, double lambda);

    int dim() const { return dim_; }
    const std::map<MultiIndex, double>& terms() const { return terms_; }
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    // sum_alpha |p_alpha|
    double coeff_l1() const;

    // sum_alpha p_alpha (i xi)^alpha. Throws DimensionMismatch.
    cplx eval_at_i_xi(std::span<const double> xi) const;

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator*(double s) const;
    MultiPoly pow(int n) const;

private:
    int dim_;
    std::map<MultiIndex, double> terms_;
};

// The symbol q(i xi) / p(i xi).
struct RationalMultiplier {
    MultiPoly q;
    MultiPoly p;

    cplx operator()(std::span<const double> xi) const;
};

struct MinModulus {
    double min = 0.0;
    std::vector<double> argmin;
};

MinModulus min_modulus_on_grid(const MultiPoly& p, const std::vector<std::vector<double>>& freqs);
MinModulus min_modulus_on_grid(const MultiPoly& p, const Grid& grid);

// zero_threshold * (1 + sum |p_alpha|).
double vanishing_threshold(const MultiPoly& p);

// Throws ZeroOnAxis with the offending frequency if |p(i xi)| falls below the
// threshold anywhere on the grid's frequency lattice.
void require_nonvanishing(const MultiPoly& p, const Grid& grid);

struct KappaEstimate {
    double kappa = 0.0;
    // c_gamma for |gamma| = 0..gamma_max (max over multi-indices of that order).
    std::vector<double> constants;
    // Growth rate of |D^gamma m| <xi>^{kappa+|gamma|} against log<xi>, per order;
    // near or below 0 when the bound holds with a constant.
    std::vector<double> excess_slopes;
    double residual = 0.0;  // RMS of the log-log fit
};

// Least-squares decay order of max over directions of |m(i xi)| on log-spaced
// shells 1 <= |xi| <= xi_range; the slope is fitted on the upper half of the
// shells. Constants c_gamma cover all shells. Throws ZeroOnAxis, FitFailed.
KappaEstimate estimate_kappa(const RationalMultiplier& m, int gamma_max = defaults::kappa_gamma_max,
                             double xi_range = defaults::kappa_xi_range, int shells = defaults::kappa_shells,
                             int directions = defaults::kappa_directions);

// Unit directions used by estimate_kappa.
std::vector<std::vector<double>> probe_directions(int dim, int count);

}  // namespace lspde
