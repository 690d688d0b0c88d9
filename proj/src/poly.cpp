#include "lspde/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lspde/errors.hpp"
#include "lspde/text.hpp"

namespace lspde {

namespace {

constexpr double kFitResidualMax = 0.1;

cplx i_power(int n)
{
    switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

double bracket(std::span<const double> xi)
{
    double s = 1.0;
    for (double v : xi) s += v * v;
    return std::sqrt(s);
}

// Least-squares slope and RMS residual of y against x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - my - slope * (x[i] - mx);
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

// All multi-indices of total order k in d variables.
std::vector<MultiIndex> indices_of_order(int d, int k)
{
    std::vector<MultiIndex> out;
    MultiIndex a(static_cast<std::size_t>(d), 0);
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == d - 1) {
            a[static_cast<std::size_t>(j)] = left;
            out.push_back(a);
            return;
        }
        for (int v = left; v >= 0; --v) {
            a[static_cast<std::size_t>(j)] = v;
            self(self, j + 1, left - v);
        }
    };
    rec(rec, 0, k);
    return out;
}

// D^gamma f at xi by tensor-product central differences with step h.
cplx derivative(const RationalMultiplier& m, const std::vector<double>& xi, const MultiIndex& gamma, double h)
{
    const int d = static_cast<int>(xi.size());
    std::vector<double> pt(xi);
    cplx total = 0.0;
    auto rec = [&](auto&& self, int j, double weight) -> void {
        if (j == d) {
            total += weight * m(pt);
            return;
        }
        const int k = gamma[static_cast<std::size_t>(j)];
        double binom = 1.0;
        for (int i = 0; i <= k; ++i) {
            pt[static_cast<std::size_t>(j)] = xi[static_cast<std::size_t>(j)] + (0.5 * k - i) * h;
            self(self, j + 1, weight * (i % 2 == 0 ? binom : -binom));
            binom = binom * (k - i) / (i + 1);
        }
        pt[static_cast<std::size_t>(j)] = xi[static_cast<std::size_t>(j)];
    };
    rec(rec, 0, 1.0);
    int order = 0;
    for (int g : gamma) order += g;
    return total / std::pow(h, order);
}

}  // namespace

MultiPoly::MultiPoly(int dim) : dim_(dim)
{
    if (dim < 1) throw InvalidArgument("polynomial dimension must be >= 1");
}

MultiPoly::MultiPoly(int dim, std::map<MultiIndex, double> terms) : MultiPoly(dim)
{
    for (auto& [alpha, c] : terms) {
        if (static_cast<int>(alpha.size()) != dim)
            throw DimensionMismatch("polynomial term has multi-index of the wrong length");
        for (int a : alpha)
            if (a < 0) throw InvalidArgument("polynomial multi-index entries must be >= 0");
        if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
        if (c != 0.0) terms_[alpha] += c;
    }
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0.0; });
}

MultiPoly MultiPoly::constant(int dim, double c)
{
    return MultiPoly(dim, {{MultiIndex(static_cast<std::size_t>(dim), 0), c}});
}

MultiPoly MultiPoly::monomial(MultiIndex alpha, double coeff)
{
    const int d = static_cast<int>(alpha.size());
    return MultiPoly(d, {{std::move(alpha), coeff}});
}

MultiPoly MultiPoly::helmholtz(int dim, double lambda)
{
    std::map<MultiIndex, double> t;
    t[MultiIndex(static_cast<std::size_t>(dim), 0)] = lambda;
    for (int j = 0; j < dim; ++j) {
        MultiIndex a(static_cast<std::size_t>(dim), 0);
        a[static_cast<std::size_t>(j)] = 2;
        t[a] = -1.0;
    }
    return MultiPoly(dim, std::move(t));
}

int MultiPoly::degree() const
{
    int deg = 0;
    for (const auto& [alpha, c] : terms_) {
        int s = 0;
        for (int a : alpha) s += a;
        deg = std::max(deg, s);
    }
    return deg;
}

double MultiPoly::coeff_l1() const
{
    double s = 0.0;
    for (const auto& kv : terms_) s += std::abs(kv.second);
    return s;
}

cplx MultiPoly::eval_at_i_xi(std::span<const double> xi) const
{
    if (static_cast<int>(xi.size()) != dim_) throw DimensionMismatch("frequency has the wrong dimension");
    cplx sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
        double mono = c;
        int order = 0;
        for (int j = 0; j < dim_; ++j) {
            const int a = alpha[static_cast<std::size_t>(j)];
            order += a;
            for (int k = 0; k < a; ++k) mono *= xi[static_cast<std::size_t>(j)];
        }
        sum += mono * i_power(order);
    }
    return sum;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const
{
    if (o.dim_ != dim_) throw DimensionMismatch("polynomial dimensions differ");
    auto t = terms_;
    for (const auto& [alpha, c] : o.terms_) t[alpha] += c;
    return MultiPoly(dim_, std::move(t));
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const
{
    if (o.dim_ != dim_) throw DimensionMismatch("polynomial dimensions differ");
    std::map<MultiIndex, double> t;
    for (const auto& [a, ca] : terms_) {
        for (const auto& [b, cb] : o.terms_) {
            MultiIndex s(a);
            for (std::size_t j = 0; j < s.size(); ++j) s[j] += b[j];
            t[s] += ca * cb;
        }
    }
    return MultiPoly(dim_, std::move(t));
}

MultiPoly MultiPoly::operator*(double s) const
{
    auto t = terms_;
    for (auto& kv : t) kv.second *= s;
    return MultiPoly(dim_, std::move(t));
}

MultiPoly MultiPoly::pow(int n) const
{
    if (n < 0) throw InvalidArgument("polynomial power must be >= 0");
    MultiPoly r = constant(dim_, 1.0);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
}

cplx RationalMultiplier::operator()(std::span<const double> xi) const
{
    return q.eval_at_i_xi(xi) / p.eval_at_i_xi(xi);
}

MinModulus min_modulus_on_grid(const MultiPoly& p, const std::vector<std::vector<double>>& freqs)
{
    if (freqs.empty()) throw InvalidArgument("min_modulus_on_grid: empty frequency set");
    MinModulus out{HUGE_VAL, {}};
    for (const auto& xi : freqs) {
        const double v = std::abs(p.eval_at_i_xi(xi));
        if (v < out.min) out = {v, xi};
    }
    return out;
}

MinModulus min_modulus_on_grid(const MultiPoly& p, const Grid& grid)
{
    if (p.dim() != grid.dim()) throw DimensionMismatch("polynomial and grid dimensions differ");
    MinModulus out{HUGE_VAL, {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto xi = grid.frequency(k);
        const double v = std::abs(p.eval_at_i_xi(xi));
        if (v < out.min) out = {v, xi};
    }
    return out;
}

double vanishing_threshold(const MultiPoly& p)
{
    return defaults::zero_threshold * (1.0 + p.coeff_l1());
}

void require_nonvanishing(const MultiPoly& p, const Grid& grid)
{
    const auto mm = min_modulus_on_grid(p, grid);
    if (mm.min < vanishing_threshold(p)) throw ZeroOnAxis(mm.argmin, mm.min);
}

std::vector<std::vector<double>> probe_directions(int dim, int count)
{
    std::vector<std::vector<double>> dirs;
    if (dim == 1) return {{1.0}, {-1.0}};
    if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            const double t = 2.0 * std::numbers::pi * k / count;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    // Fibonacci points on the sphere.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double r = std::sqrt(1.0 - z * z);
        std::vector<double> v{r * std::cos(golden * k), r * std::sin(golden * k), z};
        v.resize(static_cast<std::size_t>(dim), 0.0);
        dirs.push_back(v);
    }
    return dirs;
}

KappaEstimate estimate_kappa(const RationalMultiplier& m, int gamma_max, double xi_range, int shells, int directions)
{
    const int d = m.p.dim();
    if (m.q.dim() != d) throw DimensionMismatch("q and p dimensions differ");
    if (shells < 3 || !(xi_range > 1.0)) throw InvalidArgument("estimate_kappa: need >= 3 shells and xi_range > 1");
    const auto dirs = probe_directions(d, directions);
    const double thr = vanishing_threshold(m.p);

    std::vector<std::vector<double>> points;
    std::vector<double> log_br;
    std::vector<double> log_max;
    for (int s = 0; s < shells; ++s) {
        const double r = std::exp(std::log(xi_range) * s / (shells - 1));
        double best = 0.0;
        for (const auto& e : dirs) {
            std::vector<double> xi(e);
            for (double& v : xi) v *= r;
            const cplx pv = m.p.eval_at_i_xi(xi);
            if (std::abs(pv) < thr) throw ZeroOnAxis(xi, std::abs(pv));
            best = std::max(best, std::abs(m.q.eval_at_i_xi(xi) / pv));
            points.push_back(std::move(xi));
        }
        if (!(best > 0.0)) throw FitFailed("estimate_kappa: multiplier vanishes on a whole shell");
        log_br.push_back(std::log(bracket(points.back())));
        log_max.push_back(std::log(best));
    }
    // The decay order is asymptotic: fit on the upper half of the shells, where
    // low-frequency crossovers of the symbol have died out.
    const auto upper = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + shells / 2, v.end());
    };
    const auto [slope, resid] = fit_line(upper(log_br), upper(log_max));
    KappaEstimate out;
    out.kappa = -slope;
    out.residual = resid;
    if (resid > kFitResidualMax)
        throw FitFailed("estimate_kappa: log-log fit residual " + format_real(resid) + " exceeds " +
                        format_real(kFitResidualMax));

    for (int g = 0; g <= gamma_max; ++g) {
        const auto gammas = indices_of_order(d, g);
        double cg = 0.0;
        std::vector<double> shell_max(static_cast<std::size_t>(shells), 0.0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double br = bracket(points[i]);
            const double h = 1e-4 * br;
            for (const auto& gamma : gammas) {
                const double v = std::abs(g == 0 ? m(points[i]) : derivative(m, points[i], gamma, h)) *
                                 std::pow(br, out.kappa + g);
                cg = std::max(cg, v);
                auto& sm = shell_max[i / dirs.size()];
                sm = std::max(sm, v);
            }
        }
        out.constants.push_back(cg);
        std::vector<double> ly;
        for (double v : shell_max) ly.push_back(std::log(std::max(v, 1e-300)));
        out.excess_slopes.push_back(fit_line(upper(log_br), upper(ly)).first);
    }
    return out;
}

}  // namespace lspde
