#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/exact.hpp"
#include "iwalab/matrix.hpp"
#include "iwalab/padic.hpp"

namespace iwalab {

/// X for Lambda(Gamma) (gamma <-> 1+X), Y for Lambda(H) (h <-> 1+Y).
enum class Variable { X, Y };

inline constexpr std::size_t kDefaultSeriesOrder = 128;

/// Element of Z_p[[X]] known modulo X^order, or an exact polynomial.
///
/// Exact polynomials store coefficients up to their degree and behave as if
/// every higher coefficient were known to be zero. Truncated series store
/// exactly `order()` coefficients. Arithmetic between a truncated series and
/// anything else truncates to the smaller known order; it never widens.
class PowerSeries {
public:
    /// Exact polynomial with the given (reduced) coefficients.
    static PowerSeries polynomial(const PadicContext& ctx, const std::vector<mpz_class>& coeffs,
                                  Variable var = Variable::X);
    static PowerSeries polynomial(const PadicContext& ctx, const std::vector<PadicInt>& coeffs,
                                  Variable var = Variable::X);
    /// Series known modulo X^{coeffs.size()}.
    static PowerSeries truncated(const PadicContext& ctx, const std::vector<mpz_class>& coeffs,
                                 Variable var = Variable::X);
    static PowerSeries constant(const PadicContext& ctx, const mpz_class& c, Variable var = Variable::X);
    static PowerSeries zero(const PadicContext& ctx, Variable var = Variable::X) { return constant(ctx, 0, var); }
    static PowerSeries one(const PadicContext& ctx, Variable var = Variable::X) { return constant(ctx, 1, var); }
    /// The exact polynomial X.
    static PowerSeries variable(const PadicContext& ctx, Variable var = Variable::X);

    const PadicContext& context() const noexcept { return ctx_; }
    Variable var() const noexcept { return var_; }
    bool is_exact() const noexcept { return exact_; }
    /// Number of stored coefficients: the truncation order for truncated
    /// series, degree + 1 for exact polynomials.
    std::size_t order() const noexcept { return coeffs_.size(); }
    /// Degree of an exact polynomial (0 for the zero polynomial).
    std::optional<std::size_t> exact_degree() const;

    /// Coefficient of X^i. Throws PrecisionExhausted past a truncation.
    PadicInt coeff(std::size_t i) const;
    const std::vector<mpz_class>& residues() const noexcept { return coeffs_; }

    bool is_zero() const;

    PowerSeries operator-() const;
    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
    PowerSeries scaled(const PadicInt& c) const;

    /// Same coefficients, truncated below X^order (always a truncated series).
    PowerSeries truncate(std::size_t order) const;
    PowerSeries with_precision(int precision) const;

    /// Same context, variable, exactness and coefficients.
    bool operator==(const PowerSeries& other) const;

    std::string to_string() const;

private:
    PowerSeries(const PadicContext& ctx, std::vector<mpz_class> coeffs, Variable var, bool exact);
    friend void check_compatible(const PowerSeries& a, const PowerSeries& b);

    PadicContext ctx_;
    Variable var_;
    std::vector<mpz_class> coeffs_;
    bool exact_;
};

/// f = p^mu * distinguished * unit.
struct WeierstrassData {
    int mu = 0;
    PowerSeries distinguished;
    PowerSeries unit;

    std::size_t lambda() const { return *distinguished.exact_degree(); }
};

/// A continuous character of Gamma, determined by u = rho(gamma) in 1 + pZ_p.
class Character {
public:
    Character(const PadicInt& u);
    /// Integral characters remember their integer value for exactness checks.
    static Character from_integer(const PadicContext& ctx, const mpz_class& u);
    static Character trivial(const PadicContext& ctx) { return from_integer(ctx, 1); }

    const PadicInt& u() const noexcept { return u_; }
    const std::optional<mpz_class>& integer() const noexcept { return integer_; }
    bool is_trivial() const { return u_ == PadicInt::one(u_.context()); }

    /// rho^k, i.e. u^k. Stays integral when rho is.
    Character power(const mpz_class& k) const;
    Character with_precision(int precision) const;

private:
    PadicInt u_;
    std::optional<mpz_class> integer_;
};

enum class Direction { Forward, Inverse };

struct WeierstrassQuotient {
    PowerSeries quotient;
    PowerSeries remainder;
};

/// f = q*g + r with deg r < lambda(g).
WeierstrassQuotient weierstrass_divide(const PowerSeries& f, const PowerSeries& g);

/// Factors f = p^mu * P * u with P distinguished of degree lambda.
WeierstrassData weierstrass_prepare(const PowerSeries& f);

struct LambdaMu {
    std::size_t lambda;
    int mu;
    bool operator==(const LambdaMu&) const = default;
};
LambdaMu lambda_mu(const PowerSeries& f);

/// Tw_rho (forward): X -> u(1+X) - 1. Inverse applies Tw_{rho^{-1}}.
PowerSeries twist_series(const PowerSeries& f, const Character& rho, Direction direction);

/// f(u - 1) (forward) or f(u^{-1} - 1) (inverse). Throws TailUncertified when
/// the discarded tail of a truncated series could reach digits below p^N.
PadicInt evaluate_character(const PowerSeries& f, const Character& rho, Direction direction);

/// omega_n = (1+X)^{p^n} - 1 as an exact polynomial.
PowerSeries omega(int n, const PadicContext& ctx, Variable var = Variable::X);

/// Coefficients of f mod omega_n (length p^n). Throws PrecisionExhausted when
/// a truncated f does not determine the residue class to p^N.
std::vector<mpz_class> reduce_mod_omega(const PowerSeries& f, int n);

/// p^n x p^n matrix (rows X^k f mod omega_n) of multiplication by f on
/// Lambda/(omega_n), in the basis 1, X, ..., X^{p^n - 1}.
PadicMatrix mult_matrix_mod_omega(const PowerSeries& f, int n);

/// det of multiplication by f on Lambda/(omega_n).
PadicInt det_mult_mod_omega(const PowerSeries& f, int n);

/// p^n, checked to stay addressable.
std::size_t level_size(const mpz_class& p, int n);

}  // namespace iwalab
