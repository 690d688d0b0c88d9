#include "lspde/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "lspde/errors.hpp"
#include "lspde/linear.hpp"
#include "lspde/text.hpp"

namespace lspde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

BesovParams solution_space(const BesovParams& params)
{
    BesovParams b = params;
    b.t = params.r;
    b.validate();
    return b;
}

class PicardMap {
public:
    PicardMap(const MultiPoly& p, const Nonlinearity& g, const Grid& grid, const BesovParams& params)
        : inverse_{MultiPoly::constant(p.dim(), 1.0), p}, g_(g), space_(solution_space(params))
    {
        for (std::size_t i = 0; i < grid.size(); ++i) coords_.push_back(grid.coordinate(i));
    }

    // g(x, Re y(x)) sampled on the grid.
    Field nonlinear(const Field& y) const
    {
        Field out(y.grid(), Domain::physical);
        for (std::size_t i = 0; i < y.size(); ++i) out[i] = g_(coords_[i], y[i].real());
        return out;
    }

    Field apply(const Field& u, const Field& v) const { return apply_multiplier(inverse_, nonlinear(u + v)); }
    double norm(const Field& f) const { return besov_norm(f, space_, part_); }

private:
    RationalMultiplier inverse_;
    const Nonlinearity& g_;
    BesovParams space_;
    DyadicPartition part_;
    std::vector<std::vector<double>> coords_;
};

// |p s^ - g^ - L^|_2 / |p s^|_2 over the lattice.
double weak_residual(const MultiPoly& p, const Field& s, const Field& G, const Field& L)
{
    const Field S = dft(s);
    const Field Gh = dft(G);
    const Grid& grid = s.grid();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx ps = p.eval_at_i_xi(grid.frequency(i)) * S[i];
        num += std::norm(ps - Gh[i] - L[i]);
        den += std::norm(ps);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

PicardResult iterate(const MultiPoly& p, const Nonlinearity& g, const Field& u, const Field& L_hat,
                     const BesovParams& params, const ContractionCertificate& cert, const PicardOptions& opt)
{
    if (!(cert.ratio < 1.0)) throw NotAContraction(cert.ratio);
    if (!(opt.tol > 0.0) || opt.max_iter < 1) throw InvalidArgument("picard: tol must be > 0 and max_iter >= 1");
    const PicardMap T(p, g, u.grid(), params);
    const double u_norm = T.norm(u);

    PicardResult out;
    out.u = u;
    out.certificate = cert;
    Field v(u.grid(), Domain::physical);
    double prev = kNaN;
    bool converged = false;
    for (int n = 1; n <= opt.max_iter; ++n) {
        Field next = T.apply(u, v);
        const double inc = T.norm(next - v);
        const double ratio = n >= 2 && prev > 0.0 ? inc / prev : kNaN;
        out.log.push_back({n, inc, ratio});
        // Ratios of increments at roundoff level carry no information.
        const double floor = 1e-12 * (1.0 + u_norm + T.norm(next));
        if (n >= 2 && prev > floor && inc > floor && ratio > cert.ratio * (1.0 + opt.slack))
            throw ContractionViolated(n, ratio, cert.ratio);
        v = std::move(next);
        out.iterations = n;
        if (inc <= opt.tol) {
            converged = true;
            break;
        }
        prev = inc;
    }
    if (!converged) {
        const IterationRecord& last = out.log.back();
        throw MaxIterExceeded(out.iterations, last.increment, last.ratio);
    }
    out.v = v;
    out.s = u + v;
    const Field G = T.nonlinear(out.s);
    out.fixed_point_residual = T.norm(apply_multiplier({MultiPoly::constant(p.dim(), 1.0), p}, G) - v);
    out.weak_residual = weak_residual(p, out.s, G, L_hat);
    return out;
}

}  // namespace

Nonlinearity Nonlinearity::sine(double c)
{
    return {"sin", [c](std::span<const double>, double y) { return -c * std::sin(y); }, std::abs(c), std::abs(c)};
}

Nonlinearity Nonlinearity::tanh(double c)
{
    return {"tanh", [c](std::span<const double>, double y) { return -c * std::tanh(y); }, std::abs(c), std::abs(c)};
}

Nonlinearity Nonlinearity::constant(double c)
{
    return {"constant", [c](std::span<const double>, double) { return c; }, 0.0, std::abs(c)};
}

Nonlinearity Nonlinearity::zero()
{
    return {"zero", [](std::span<const double>, double) { return 0.0; }, 0.0, 0.0};
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> ys, std::vector<double> gs, double c)
{
    if (ys.size() < 2 || ys.size() != gs.size())
        throw InvalidArgument("tabulated nonlinearity needs at least two (y, g) nodes of equal count");
    for (std::size_t i = 0; i + 1 < ys.size(); ++i)
        if (!(ys[i] < ys[i + 1])) throw InvalidArgument("tabulated nonlinearity nodes must be increasing");
    double lip = 0.0;
    double top = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        top = std::max(top, std::abs(gs[i]));
        if (i + 1 < ys.size()) lip = std::max(lip, std::abs((gs[i + 1] - gs[i]) / (ys[i + 1] - ys[i])));
    }
    auto fn = [ys = std::move(ys), gs = std::move(gs), c](std::span<const double>, double y) {
        if (y <= ys.front()) return c * gs.front();
        if (y >= ys.back()) return c * gs.back();
        const std::size_t j = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), y) - ys.begin());
        const double w = (y - ys[j - 1]) / (ys[j] - ys[j - 1]);
        return c * ((1.0 - w) * gs[j - 1] + w * gs[j]);
    };
    return {"tabulated", fn, std::abs(c) * lip, std::abs(c) * top};
}

NonlinearityCheck verify_nonlinearity(const Nonlinearity& g, int dim, int pairs, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-10.0, 10.0);
    std::normal_distribution<double> n01;
    const double scales[] = {1.0, 10.0, 100.0};
    const double gaps[] = {1e-3, 1.0, 10.0};
    NonlinearityCheck out;
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int i = 0; i < pairs; ++i) {
        for (double& v : x) v = ux(rng);
        const double y1 = scales[i % 3] * n01(rng);
        const double y2 = y1 + gaps[(i / 3) % 3] * n01(rng);
        const double g1 = g(x, y1);
        if (y1 != y2) out.max_quotient = std::max(out.max_quotient, std::abs(g1 - g(x, y2)) / std::abs(y1 - y2));
        out.max_growth_ratio = std::max(out.max_growth_ratio, std::abs(g1) / (1.0 + std::abs(y1)));
    }
    out.lip_ok = out.max_quotient <= g.lip * (1.0 + 1e-6);
    out.growth_ok = out.max_growth_ratio <= g.growth * (1.0 + 1e-6);
    return out;
}

ContractionCertificate estimate_operator_norms(const MultiPoly& p, const BesovParams& params, const Grid& grid,
                                               int n_probes, std::uint64_t seed)
{
    if (n_probes < 1) throw InvalidArgument("estimate_operator_norms needs at least one probe");
    const BesovParams space = solution_space(params);
    require_nonvanishing(p, grid);
    const DyadicPartition part;
    const RationalMultiplier inverse{MultiPoly::constant(p.dim(), 1.0), p};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    std::uniform_real_distribution<double> jitter(-0.5, 0.5);
    double dxi = HUGE_VAL;
    for (double L : grid.box()) dxi = std::min(dxi, 2.0 * std::numbers::pi / L);
    const double top = grid.max_frequency_norm();

    ContractionCertificate out;
    out.probes = n_probes;
    for (int j = 0; j < n_probes; ++j) {
        // Narrow-band probe around a log-spaced centre; probe 0 sits at the origin.
        const double c = j == 0 ? 0.0 : dxi * std::pow(top / dxi, (j - 1 + 0.5 + jitter(rng)) / std::max(1, n_probes - 1));
        const double width = std::max(dxi, 0.25 * c);
        Field W(grid, Domain::spectral);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double z = (grid.frequency_norm(i) - c) / width;
            W[i] = cplx(n01(rng), n01(rng)) * std::exp(-0.5 * z * z);
        }
        Field w = idft(W);
        for (auto& v : w.values()) v = v.real();
        const double wl = detail::weighted_lr_formula(w, space.r, space.rho);
        const double wb = besov_norm(w, space, part);
        if (!(wl > 0.0) || !(wb > 0.0)) continue;
        out.op_probe = std::max(out.op_probe, besov_norm(apply_multiplier(inverse, w), space, part) / wl);
        out.embed_probe = std::max(out.embed_probe, wl / wb);
    }
    out.op_norm_est = defaults::probe_safety * out.op_probe;
    out.embed_norm_est = defaults::probe_safety * out.embed_probe;

    out.op_exact = kNaN;
    out.embed_exact = kNaN;
    if (space.r == 2.0 && space.rho == 0.0) {
        const int K = k_max(grid);
        out.op_exact = 0.0;
        out.embed_exact = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = grid.frequency_norm(i);
            double w = 0.0;
            for (int k = 0; k <= K; ++k) w += std::pow(2.0, 2.0 * space.l * k) * std::pow(part.phi(k, r), 2);
            out.op_exact = std::max(out.op_exact, std::sqrt(w) / std::abs(p.eval_at_i_xi(grid.frequency(i))));
            out.embed_exact = std::max(out.embed_exact, 1.0 / std::sqrt(w));
        }
    }
    return out;
}

ContractionCertificate certify(const MultiPoly& p, const Nonlinearity& g, const BesovParams& params,
                               const Grid& grid, int n_probes, std::uint64_t seed)
{
    ContractionCertificate c = estimate_operator_norms(p, params, grid, n_probes, seed);
    c.lip = g.lip;
    c.ratio = c.op_norm_est * c.embed_norm_est * c.lip;
    return c;
}

RegularityCondition regularity_condition(double beta, double kappa, int d, double r)
{
    RegularityCondition c;
    c.l = beta - kappa + d * (0.5 - (std::isinf(r) ? 0.0 : 1.0 / r));
    c.bound = -0.5 * d;
    c.satisfied = c.l < c.bound;
    return c;
}

PicardResult picard_solve(const MultiPoly& p, const Nonlinearity& g, const NoiseRealization& noise,
                          const BesovParams& params, const PicardOptions& opt)
{
    if (!verify_nonlinearity(g, noise.grid.dim()).passed())
        throw InvalidArgument("nonlinearity '" + g.name + "' violates its declared Lipschitz or growth constant");
    const ContractionCertificate cert = certify(p, g, params, noise.grid, opt.n_probes, opt.probe_seed);
    if (!(cert.ratio < 1.0)) throw NotAContraction(cert.ratio);
    const Field L = noise.density();
    const Field u = solve_linear(p, MultiPoly::constant(p.dim(), 1.0), noise);
    return iterate(p, g, u, dft(L), params, cert, opt);
}

PicardResult picard_from_u(const MultiPoly& p, const Nonlinearity& g, const Field& u, const BesovParams& params,
                           const ContractionCertificate& cert, const PicardOptions& opt)
{
    // p(D) u stands in for the noise.
    Field U = dft(u);
    const Grid& grid = u.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) U[i] *= p.eval_at_i_xi(grid.frequency(i));
    return iterate(p, g, u, U, params, cert, opt);
}

double solution_continuity_probe(const MultiPoly& p, const Nonlinearity& g, const BesovParams& params,
                                 const Field& u1, const Field& u2, const ContractionCertificate& cert,
                                 const PicardOptions& opt)
{
    if (!(cert.ratio < 1.0)) throw NotAContraction(cert.ratio);
    const Field du = u1 - u2;
    if (du.max_abs() == 0.0) return 0.0;
    const BesovParams space = solution_space(params);
    const DyadicPartition part;
    const PicardResult a = picard_from_u(p, g, u1, params, cert, opt);
    const PicardResult b = picard_from_u(p, g, u2, params, cert, opt);
    return besov_norm(a.v - b.v, space, part) / besov_norm(du, space, part);
}

void write_iteration_csv(const std::vector<IterationRecord>& log, std::ostream& os)
{
    os << "n,increment,ratio\n";
    for (const auto& r : log) os << r.n << ',' << format_real(r.increment) << ',' << format_real(r.ratio) << '\n';
}

}  // namespace lspde
