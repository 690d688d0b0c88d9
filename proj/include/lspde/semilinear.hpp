#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lspde/besov.hpp"
#include "lspde/defaults.hpp"
#include "lspde/levy_noise.hpp"
#include "lspde/poly.hpp"

namespace lspde {

// g(x, y) with a declared Lipschitz constant in y and growth |g| <= C (1 + |y|).
struct Nonlinearity {
    std::string name;
    std::function<double(std::span<const double>, double)> g;
    double lip = 0.0;
    double growth = 0.0;

    double operator()(std::span<const double> x, double y) const { return g(x, y); }

    // -c sin(y): p(D) s = g(s) + L is  p(D) s + c sin(s) = L.
    static Nonlinearity sine(double c);
    static Nonlinearity tanh(double c);  // -c tanh(y)
    static Nonlinearity constant(double c);
    static Nonlinearity zero();
    // c times the piecewise-linear interpolant of (ys, gs), constant outside.
    static Nonlinearity tabulated(std::vector<double> ys, std::vector<double> gs, double c = 1.0);
};

struct NonlinearityCheck {
    double max_quotient = 0.0;      // max |g(x,y1) - g(x,y2)| / |y1 - y2|
    double max_growth_ratio = 0.0;  // max |g(x,y)| / (1 + |y|)
    bool lip_ok = true;
    bool growth_ok = true;
    bool passed() const { return lip_ok && growth_ok; }
};

// Randomized difference quotients over `pairs` samples; passes when no sample
// exceeds the declared constants by more than a relative 1e-6.
NonlinearityCheck verify_nonlinearity(const Nonlinearity& g, int dim, int pairs = 10000, std::uint64_t seed = 0);

struct ContractionCertificate {
    double op_probe = 0.0;     // max probe ratio |p(D)^-1 w|_B / |w|_{L^r(rho)}
    double embed_probe = 0.0;  // max probe ratio |w|_{L^r(rho)} / |w|_B
    double op_norm_est = 0.0;  // safety * op_probe
    double embed_norm_est = 0.0;
    double lip = 0.0;
    double ratio = 0.0;  // op_norm_est * embed_norm_est * lip
    // Exact grid values for r = 2, rho = 0; NaN otherwise.
    double op_exact = 0.0;
    double embed_exact = 0.0;
    int probes = 0;
};

// Norm estimates from n_probes random narrow-band fields; lip and ratio are left 0.
// params.t is ignored: the space is B^beta_{r,r}(rho). Throws ZeroOnAxis.
ContractionCertificate estimate_operator_norms(const MultiPoly& p, const BesovParams& params, const Grid& grid,
                                               int n_probes = defaults::n_probes, std::uint64_t seed = 0);

ContractionCertificate certify(const MultiPoly& p, const Nonlinearity& g, const BesovParams& params,
                               const Grid& grid, int n_probes = defaults::n_probes, std::uint64_t seed = 0);

// Continuum condition l = beta - kappa + d (1/2 - 1/r) < -d/2; reported, never enforced.
struct RegularityCondition {
    double l = 0.0;
    double bound = 0.0;  // -d/2
    bool satisfied = false;
};
RegularityCondition regularity_condition(double beta, double kappa, int d, double r);

struct IterationRecord {
    int n = 0;
    double increment = 0.0;  // |v_n - v_{n-1}|_B
    double ratio = 0.0;      // increment / previous increment, NaN for n = 1
};

struct PicardOptions {
    double tol = defaults::picard_tol;
    int max_iter = defaults::max_iter;
    int n_probes = defaults::n_probes;
    std::uint64_t probe_seed = 0;
    double slack = defaults::contraction_slack;
};

struct PicardResult {
    Field s;
    Field u;
    Field v;
    int iterations = 0;
    ContractionCertificate certificate;
    std::vector<IterationRecord> log;
    double weak_residual = 0.0;         // |p s^ - g(., s)^ - L^|_2 / |p s^|_2
    double fixed_point_residual = 0.0;  // |v - p(D)^-1 g(., u + v)|_B
};

// s = u + v with p(D) u = L and v the fixed point of v -> p(D)^-1 g(., u + v)
// from v_0 = 0. Throws NotAContraction, MaxIterExceeded, ContractionViolated,
// ZeroOnAxis, InvalidArgument when g fails verify_nonlinearity.
PicardResult picard_solve(const MultiPoly& p, const Nonlinearity& g, const NoiseRealization& noise,
                          const BesovParams& params, const PicardOptions& opt = {});

// Same iteration for a given u, with a precomputed certificate.
PicardResult picard_from_u(const MultiPoly& p, const Nonlinearity& g, const Field& u, const BesovParams& params,
                           const ContractionCertificate& cert, const PicardOptions& opt = {});

// |v1 - v2|_B / |u1 - u2|_B for the fixed points driven by u1 and u2; 0 when u1 = u2.
double solution_continuity_probe(const MultiPoly& p, const Nonlinearity& g, const BesovParams& params,
                                 const Field& u1, const Field& u2, const ContractionCertificate& cert,
                                 const PicardOptions& opt = {});

// "n,increment,ratio" rows.
void write_iteration_csv(const std::vector<IterationRecord>& log, std::ostream& os);

}  // namespace lspde
