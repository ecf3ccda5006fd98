#pragma once

#include <optional>
#include <vector>

#include "iwalab/exact.hpp"
#include "iwalab/gamma.hpp"
#include "iwalab/matrix.hpp"
#include "iwalab/series.hpp"

namespace iwalab {

/// U_{n,m}, generated by gamma~^{p^n} and H^{p^m}; index p^{n+m} in G.
struct Level {
    int n = 0;
    int m = 0;
    bool operator==(const Level&) const = default;
};

/// A Lambda(G)-module for G = H x| Gamma, free of rank d over Lambda(H) = Z_p[[Y]].
/// gamma~ acts by x -> sigma(x) A with sigma(Y) = (1+Y)^kappa - 1.
class CrossedModule {
public:
    /// A from integer polynomials in Y, row-major.
    static CrossedModule from_integers(const PadicContext& ctx, std::size_t d, const mpz_class& kappa,
                                       const std::vector<IntPoly>& entries);
    static CrossedModule from_series(std::size_t d, const PadicInt& kappa, const std::vector<PowerSeries>& entries);

    const PadicContext& context() const noexcept { return kappa_.context(); }
    std::size_t rank() const noexcept { return d_; }
    const PadicInt& kappa() const noexcept { return kappa_; }
    const PowerSeries& entry(std::size_t i, std::size_t j) const { return entries_[i * d_ + j]; }
    const std::vector<PowerSeries>& entries() const noexcept { return entries_; }
    const std::optional<std::vector<IntPoly>>& integer_entries() const noexcept { return integer_; }
    const std::optional<mpz_class>& integer_kappa() const noexcept { return integer_kappa_; }

    /// Checked level: rejects m > n + v_p(kappa - 1) with ValidationError.
    Level level(int n, int m) const;

    CrossedModule with_precision(int precision) const;

private:
    CrossedModule(std::size_t d, PadicInt kappa, std::vector<PowerSeries> entries,
                  std::optional<std::vector<IntPoly>> integer, std::optional<mpz_class> integer_kappa);

    std::size_t d_;
    PadicInt kappa_;
    std::vector<PowerSeries> entries_;
    std::optional<std::vector<IntPoly>> integer_;
    std::optional<mpz_class> integer_kappa_;
};

/// sigma^k(f) in R_m = Z_p[Y]/(omega_m), returned as a polynomial of degree < p^m.
PowerSeries sigma_power(const PowerSeries& f, const PadicInt& kappa, const mpz_class& k, int m);

/// The operator of gamma~^{p^n} on M / omega_m(Y) M, in the basis e_i (x) (1+Y)^b.
struct LevelOperator {
    Level level;
    PadicMatrix b;
    std::optional<IntMatrix> integer;  // present for integral modules
};

LevelOperator level_operator(const CrossedModule& x, const Level& level);

/// Right multiplication by A^(p^n) on R_m^d (basis e_i (x) (1+Y)^b).
PadicMatrix gamma_power_matrix(const CrossedModule& x, const Level& level);

/// det((1+X) I - B), an exact polynomial of degree d p^m.
struct AkashiPoly {
    Level level;
    PowerSeries poly;
    std::optional<IntPoly> integer;
};

AkashiPoly akashi_series(const CrossedModule& x, const Level& level);
AkashiPoly akashi_series(const LevelOperator& op);

/// Coinvariants of U on M(rho): coker(u^{p^n} B - I).
EulerResult euler_characteristic_crossed(const CrossedModule& x, const Character& rho, const Level& level);
EulerResult euler_characteristic_crossed(const LevelOperator& op, const Character& rho);

/// Valuation of Ak(u^{-p^n} - 1).
EulerResult euler_via_akashi(const CrossedModule& x, const Character& rho, const Level& level);
EulerResult euler_via_akashi(const AkashiPoly& ak, const Character& rho);

inline constexpr std::size_t kDefaultGroupRingCap = 2000;

/// Coinvariants computed in the finite group ring Z_p[G/U]^d, presented by
/// right multiplication by (gamma~ I - u A). Throws SizeCapExceeded.
EulerResult group_ring_oracle(const CrossedModule& x, const Character& rho, const Level& level,
                              std::size_t size_cap = kDefaultGroupRingCap);

TwistSearchReport search_twist_crossed(const CrossedModule& x, const std::vector<Level>& levels,
                                       const TwistSearchOptions& options);

/// First character with Exists at every level (reduced route); the report
/// carries the Akashi cross-check. Throws BudgetExhausted.
Character find_twist_crossed(const CrossedModule& x, const std::vector<Level>& levels,
                             const TwistSearchOptions& options, TwistSearchReport* report = nullptr);

/// Search options for the crossed case: the trivial character is tried first.
inline TwistSearchOptions crossed_search_defaults() {
    TwistSearchOptions o;
    o.include_trivial = true;
    return o;
}

}  // namespace iwalab
