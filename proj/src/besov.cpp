#include "lspde/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "lspde/errors.hpp"
#include "lspde/quadrature.hpp"
#include "lspde/text.hpp"

namespace lspde {

namespace {

constexpr int kNodes = 4096;

double recip(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

DyadicPartition::DyadicPartition(double sharpness) : sharpness_(sharpness), step_(1.0 / kNodes)
{
    if (!(sharpness > 0.0 && std::isfinite(sharpness)))
        throw InvalidArgument("partition sharpness must be > 0");
    auto bump = [s = sharpness](double u) { return u <= 0.0 || u >= 1.0 ? 0.0 : std::exp(-s / (u * (1.0 - u))); };
    cum_.assign(kNodes + 1, 0.0);
    dens_.assign(kNodes + 1, 0.0);
    for (int i = 0; i < kNodes; ++i) {
        double err = 0.0;
        cum_[i + 1] = cum_[i] + quad::gk15(bump, i * step_, (i + 1) * step_, err);
        dens_[i] = bump(i * step_);
    }
    const double total = cum_.back();
    for (int i = 0; i <= kNodes; ++i) {
        cum_[i] /= total;
        dens_[i] /= total;
    }
    // Enforce the exact symmetry S(u) + S(1 - u) = 1 of a symmetric bump.
    for (int i = 0; i <= kNodes / 2; ++i) {
        const double a = 0.5 * (cum_[i] + 1.0 - cum_[kNodes - i]);
        cum_[i] = a;
        cum_[kNodes - i] = 1.0 - a;
    }
    cum_[0] = 0.0;
    cum_[kNodes] = 1.0;
}

double DyadicPartition::smoothstep(double u) const
{
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // Cubic Hermite interpolation of S with exact node derivatives.
    const double x = u / step_;
    const int i = std::min(static_cast<int>(x), kNodes - 1);
    const double t = x - i;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * cum_[i] + h10 * step_ * dens_[i] + h01 * cum_[i + 1] + h11 * step_ * dens_[i + 1];
}

double DyadicPartition::phi0(double r) const
{
    if (r <= 1.0) return 1.0;
    if (r >= 1.5) return 0.0;
    return smoothstep(3.0 - 2.0 * r);
}

double DyadicPartition::phi(int k, double r) const
{
    if (k < 0) throw InvalidArgument("block index must be >= 0");
    if (k == 0) return phi0(r);
    return phi0(std::ldexp(r, -k)) - phi0(std::ldexp(r, -k + 1));
}

int k_max(const Grid& grid)
{
    const double m = grid.max_frequency_norm();
    int K = 0;
    while (std::ldexp(1.0, K) < m) ++K;
    return K;
}

bool block_truncated(const Grid& grid, int k)
{
    const double outer = k == 0 ? 1.5 : 3.0 * std::ldexp(1.0, k - 1);
    return outer > grid.nyquist_radius();
}

Block lp_block_spectral(const Field& F, int k, const DyadicPartition& part)
{
    if (F.domain() != Domain::spectral) throw DomainTagMismatch("lp_block_spectral expects a spectral field");
    const Grid& g = F.grid();
    Field G(g, Domain::spectral);
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double w = part.phi(k, g.frequency_norm(i));
        G[i] = w == 0.0 ? cplx(0.0) : w * F[i];
    }
    return {idft(G), block_truncated(g, k)};
}

Block lp_block(const Field& f, int k, const DyadicPartition& part)
{
    if (f.domain() != Domain::physical) throw DomainTagMismatch("lp_block expects a physical field");
    return lp_block_spectral(dft(f), k, part);
}

void BesovParams::validate() const
{
    if (!(r > 0.0)) throw InvalidR("Besov integrability r must be > 0");
    if (!(t > 0.0)) throw InvalidArgument("Besov summability t must be > 0");
    if (!std::isfinite(l) || !std::isfinite(rho)) throw InvalidArgument("Besov l and rho must be finite");
}

bool BesovTerms::any_truncated() const
{
    return std::find(truncated.begin(), truncated.end(), true) != truncated.end();
}

BesovTerms besov_terms(const Field& f, const BesovParams& params, const DyadicPartition& part)
{
    params.validate();
    if (f.domain() != Domain::physical) throw DomainTagMismatch("besov_norm expects a physical field");
    Field F = dft(f);
    // Coefficients under the transform's roundoff floor would otherwise dominate
    // quasi-norm sums through small powers of 1e-16 noise.
    const double floor = defaults::spectral_noise_floor * F.max_abs();
    for (auto& v : F.values())
        if (std::abs(v) < floor) v = 0.0;
    const int K = k_max(f.grid());
    BesovTerms out;
    for (int k = 0; k <= K; ++k) {
        const Block b = lp_block_spectral(F, k, part);
        out.terms.push_back(std::pow(2.0, params.l * k) *
                            detail::weighted_lr_formula(b.field, params.r, params.rho));
        out.truncated.push_back(b.truncated);
    }
    if (std::isinf(params.t)) {
        out.norm = *std::max_element(out.terms.begin(), out.terms.end());
    } else {
        double s = 0.0;
        for (double a : out.terms) s += std::pow(a, params.t);
        out.norm = std::pow(s, 1.0 / params.t);
    }
    return out;
}

double besov_norm(const Field& f, const BesovParams& params, const DyadicPartition& part)
{
    return besov_terms(f, params, part).norm;
}

double sobolev_norm(const Field& f, double l, double rho, const DyadicPartition& part)
{
    return besov_norm(f, {l, 2.0, 2.0, rho}, part);
}

double sobolev_spectral_norm(const Field& f, double l)
{
    if (f.domain() != Domain::physical) throw DomainTagMismatch("sobolev_spectral_norm expects a physical field");
    const Field F = dft(f);
    const Grid& g = F.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double r = g.frequency_norm(i);
        s += std::pow(1.0 + r * r, l) * std::norm(F[i]);
    }
    return std::sqrt(s * g.frequency_cell_volume() / std::pow(2.0 * std::numbers::pi, g.dim()));
}

EquivalenceBracket sobolev_equivalence(const Grid& grid, double l, const DyadicPartition& part)
{
    const int K = k_max(grid);
    EquivalenceBracket b{HUGE_VAL, 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.frequency_norm(i);
        double w = 0.0;
        for (int k = 0; k <= K; ++k) w += std::pow(2.0, 2.0 * l * k) * std::pow(part.phi(k, r), 2);
        const double q = std::sqrt(w / std::pow(1.0 + r * r, l));
        b.lo = std::min(b.lo, q);
        b.hi = std::max(b.hi, q);
    }
    return b;
}

const char* to_string(Embedding e)
{
    switch (e) {
    case Embedding::Embedded: return "embedded";
    case Embedding::CompactlyEmbedded: return "compactly-embedded";
    default: return "not-implied";
    }
}

Embedding embedding_check(const BesovSpace& src, const BesovSpace& dst, int d)
{
    if (d < 1) throw InvalidArgument("embedding_check: d must be >= 1");
    if (!(src.p > 0.0) || !(dst.p > 0.0)) throw InvalidArgument("embedding_check: p must lie in (0, inf]");
    if (src.tau < dst.tau) throw PreconditionViolated("embedding_check requires tau0 >= tau1");
    const double gap = src.tau - dst.tau;
    const double need = d * recip(src.p) - d * recip(dst.p);
    if (gap > need && dst.p > src.p && src.rho > dst.rho) return Embedding::CompactlyEmbedded;
    if (gap >= need && dst.p >= src.p && src.rho >= dst.rho) return Embedding::Embedded;
    return Embedding::NotImplied;
}

void write_block_energies_csv(const BesovTerms& terms, std::ostream& os)
{
    os << "k,value\n";
    for (std::size_t k = 0; k < terms.terms.size(); ++k) os << k << ',' << format_real(terms.terms[k]) << '\n';
}

}  // namespace lspde
