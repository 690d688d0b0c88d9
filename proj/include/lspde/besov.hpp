#pragma once

#include <iosfwd>
#include <vector>

#include "lspde/defaults.hpp"
#include "lspde/grid.hpp"

namespace lspde {

// Radial dyadic partition of unity. phi0 = 1 on |x| <= 1, 0 on |x| >= 3/2, with
// the transition phi0(r) = S(3 - 2r), S the normalized integral of the bump
// exp(-sharpness / (u (1 - u))) on [0, 1].
class DyadicPartition {
public:
    explicit DyadicPartition(double sharpness = defaults::partition_sharpness);

    double sharpness() const { return sharpness_; }
    double smoothstep(double u) const;
    double phi0(double r) const;
    // phi_0 for k = 0, phi0(2^-k r) - phi0(2^{-k+1} r) for k >= 1.
    double phi(int k, double r) const;

private:
    double sharpness_;
    double step_;
    std::vector<double> cum_;   // S at the nodes
    std::vector<double> dens_;  // S' at the nodes
};

inline DyadicPartition make_partition(double sharpness = defaults::partition_sharpness)
{
    return DyadicPartition(sharpness);
}

// Smallest K with 2^K >= max |xi| on the lattice: sum_{k<=K} phi_k = 1 on every mode.
int k_max(const Grid& grid);

// Block k needs the shell up to 3 * 2^{k-1} (3/2 for k = 0) inside the Nyquist radius.
bool block_truncated(const Grid& grid, int k);

struct Block {
    Field field;
    bool truncated = false;
};

// idft(phi_k dft(f)).
Block lp_block(const Field& f, int k, const DyadicPartition& part);
// Same from an already transformed field.
Block lp_block_spectral(const Field& F, int k, const DyadicPartition& part);

struct BesovParams {
    double l = 0.0;    // smoothness
    double r = 2.0;    // integrability, (0, inf]
    double t = 2.0;    // summability, (0, inf]
    double rho = 0.0;  // weight exponent

    // Throws InvalidArgument unless r, t > 0.
    void validate() const;
};

struct BesovTerms {
    std::vector<double> terms;  // 2^{lk} |Delta_k f|_{L^r(rho)}, k = 0..K
    std::vector<bool> truncated;
    double norm = 0.0;
    bool any_truncated() const;
};

// Block terms for k = 0..k_max(grid) and their l^t aggregate. Quasi-norms
// (r or t < 1) are evaluated at formula level.
BesovTerms besov_terms(const Field& f, const BesovParams& params, const DyadicPartition& part);
double besov_norm(const Field& f, const BesovParams& params, const DyadicPartition& part);

// B^l_{2,2} with weight rho.
double sobolev_norm(const Field& f, double l, double rho, const DyadicPartition& part);
// (2 pi)^{-d/2} (sum <xi>^{2l} |f^(xi)|^2 dxi^d)^{1/2}; equals |f|_{L^2} for l = 0.
double sobolev_spectral_norm(const Field& f, double l);

// Exact range of sobolev_norm / sobolev_spectral_norm over all nonzero fields
// on the grid (rho = 0): square roots of the extreme values of
// sum_k 2^{2lk} phi_k^2 / <xi>^{2l} over the lattice.
struct EquivalenceBracket {
    double lo = 0.0;
    double hi = 0.0;
};
EquivalenceBracket sobolev_equivalence(const Grid& grid, double l, const DyadicPartition& part);

struct BesovSpace {
    double tau = 0.0;
    double p = 2.0;  // (0, inf]
    double rho = 0.0;
};

enum class Embedding { Embedded, CompactlyEmbedded, NotImplied };
const char* to_string(Embedding e);

// B^{tau0}_{p0,p0}(rho0) into B^{tau1}_{p1,p1}(rho1). Throws PreconditionViolated
// when tau0 < tau1.
Embedding embedding_check(const BesovSpace& src, const BesovSpace& dst, int d);

// "k,value" rows of 2^{lk} |Delta_k f|.
void write_block_energies_csv(const BesovTerms& terms, std::ostream& os);

}  // namespace lspde
