#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/exact.hpp"
#include "iwalab/series.hpp"

namespace iwalab {

/// M = Lambda^d / Lambda^d * F for a square matrix F over Lambda = Z_p[[X]]
/// (row vectors, cokernel of right multiplication by F).
class GammaModule {
public:
    /// F from integer polynomials, row-major. The integer data is kept so
    /// that exact vanishing can be detected later.
    static GammaModule from_integers(const PadicContext& ctx, std::size_t d, const std::vector<IntPoly>& entries);
    /// F from arbitrary series, row-major.
    static GammaModule from_series(std::size_t d, const std::vector<PowerSeries>& entries);

    const PadicContext& context() const noexcept { return entries_.front().context(); }
    std::size_t rank() const noexcept { return d_; }
    const PowerSeries& entry(std::size_t i, std::size_t j) const { return entries_[i * d_ + j]; }
    const std::vector<PowerSeries>& entries() const noexcept { return entries_; }
    const std::optional<std::vector<IntPoly>>& integer_entries() const noexcept { return integer_; }

    /// Same presentation read at another precision. Integral modules are
    /// rebuilt from their integer data.
    GammaModule with_precision(int precision) const;

private:
    GammaModule(std::size_t d, std::vector<PowerSeries> entries, std::optional<std::vector<IntPoly>> integer);

    std::size_t d_;
    std::vector<PowerSeries> entries_;
    std::optional<std::vector<IntPoly>> integer_;
};

enum class EulerStatus { Exists, NotFiniteDetected, IndeterminateAtPrecision };

const char* to_string(EulerStatus status) noexcept;

struct EulerResult {
    EulerStatus status = EulerStatus::IndeterminateAtPrecision;
    long chi_exponent = 0;  // chi = p^chi_exponent when status is Exists
    long h0_exponent = 0;
    long h1_exponent = 0;
    int precision = 0;  // N the result was computed at

    bool exists() const noexcept { return status == EulerStatus::Exists; }
    bool operator==(const EulerResult&) const = default;
};

/// det F over Lambda, exactly as computed (no normalization).
PowerSeries presentation_determinant(const GammaModule& m);

/// det F normalized to p^mu * P. Throws ZeroDeterminant when det F vanishes
/// identically over Z, ZeroToPrecision when it merely vanishes mod p^N.
PowerSeries characteristic_element(const GammaModule& m);

/// Smith form of right multiplication by the rho-twisted F on (Lambda/omega_n)^d.
EulerResult euler_characteristic_direct(const GammaModule& m, const Character& rho, int n);

/// Valuation of det(multiplication by Tw_{rho^-1}(char M)) on Lambda/omega_n.
EulerResult euler_characteristic_analytic(const GammaModule& m, const Character& rho, int n);

struct TwistSearchOptions {
    int budget = 25;
    /// Try u = 1 before u = 1 + p.
    bool include_trivial = false;
    /// Draw k for u = 1 + kp from a seeded generator instead of ascending order.
    std::optional<std::uint64_t> seed;
};

struct LevelCertificate {
    int n = 0;
    int m = 0;
    EulerResult result;
    std::optional<EulerResult> cross_check;
};

struct CandidateRecord {
    mpz_class u;
    std::vector<LevelCertificate> levels;
    bool accepted = false;
};

struct TwistSearchReport {
    std::vector<CandidateRecord> candidates;
    std::optional<std::size_t> accepted;  // index into candidates

    const CandidateRecord* winner() const { return accepted ? &candidates[*accepted] : nullptr; }
    /// Some candidate tried before the accepted one (or any, when none was
    /// accepted) stayed undecided at this precision.
    bool undecided_before_acceptance() const;
};

/// Candidate values u = 1 + kp in the order they are tried.
std::vector<mpz_class> twist_candidates(const mpz_class& p, const TwistSearchOptions& options);

/// Runs the search without throwing on failure.
TwistSearchReport search_twist(const GammaModule& m, int n_max, const TwistSearchOptions& options = {});

/// First character certifying Exists at every level 0..n_max. Throws BudgetExhausted.
Character find_twist(const GammaModule& m, int n_max, const TwistSearchOptions& options = {},
                     TwistSearchReport* report = nullptr);

}  // namespace iwalab
