#pragma once

#include <compare>
#include <iosfwd>
#include <memory>
#include <string>

#include <gmpxx.h>

#include "iwalab/error.hpp"

namespace iwalab {

/// The coefficient ring Z/p^N, read as Z_p known to N p-adic digits.
///
/// Contexts are cheap to copy (shared immutable state) and compare equal when
/// both the prime and the precision agree.
class PadicContext {
public:
    static constexpr int kDefaultPrecision = 64;
    static constexpr int kMaxPrecision = 1024;

    PadicContext(const mpz_class& p, int precision = kDefaultPrecision);
    PadicContext(long p, int precision = kDefaultPrecision) : PadicContext(mpz_class(p), precision) {}

    const mpz_class& prime() const noexcept { return data_->p; }
    int precision() const noexcept { return data_->n; }
    /// p^N
    const mpz_class& modulus() const noexcept { return data_->modulus; }
    /// p as an unsigned long when it fits, 0 otherwise (fast residue tests).
    unsigned long small_prime() const noexcept { return data_->small_p; }

    PadicContext with_precision(int precision) const { return PadicContext(data_->p, precision); }

    /// Representative of x in [0, p^N).
    mpz_class reduce(const mpz_class& x) const;
    void reduce_in_place(mpz_class& x) const;
    /// Representative in (-p^N/2, p^N/2].
    mpz_class balanced(const mpz_class& residue) const;

    bool operator==(const PadicContext& other) const noexcept;

private:
    struct Data {
        mpz_class p;
        int n;
        mpz_class modulus;
        mpz_class half;
        unsigned long small_p;
    };
    std::shared_ptr<const Data> data_;
};

/// p-adic valuation at finite precision: a value in {0, ..., N-1} or AtLeastN.
class Valuation {
public:
    static Valuation finite(long e) { return Valuation(e, false); }
    static Valuation at_least(long bound) { return Valuation(bound, true); }

    bool is_finite() const noexcept { return !at_least_; }
    bool is_at_least_n() const noexcept { return at_least_; }
    /// The exponent, or the precision bound N for AtLeastN.
    long value() const noexcept { return value_; }

    std::strong_ordering operator<=>(const Valuation& other) const noexcept {
        if (at_least_ != other.at_least_) return at_least_ ? std::strong_ordering::greater : std::strong_ordering::less;
        return value_ <=> other.value_;
    }
    bool operator==(const Valuation& other) const noexcept = default;

    std::string to_string() const;

private:
    Valuation(long v, bool at_least) : value_(v), at_least_(at_least) {}
    long value_;
    bool at_least_;
};

std::ostream& operator<<(std::ostream& os, const Valuation& v);

/// Valuation of a residue modulo p^N.
Valuation valuation_of(const PadicContext& ctx, const mpz_class& residue);

class PadicInt {
public:
    PadicInt(const PadicContext& ctx, const mpz_class& value);
    PadicInt(const PadicContext& ctx, long value) : PadicInt(ctx, mpz_class(value)) {}

    static PadicInt zero(const PadicContext& ctx) { return PadicInt(ctx, 0L); }
    static PadicInt one(const PadicContext& ctx) { return PadicInt(ctx, 1L); }

    const PadicContext& context() const noexcept { return ctx_; }
    /// Representative in [0, p^N).
    const mpz_class& residue() const noexcept { return residue_; }
    /// Representative in (-p^N/2, p^N/2].
    mpz_class balanced() const { return ctx_.balanced(residue_); }

    Valuation valuation() const { return valuation_of(ctx_, residue_); }
    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return valuation() == Valuation::finite(0); }

    PadicInt operator-() const;
    PadicInt& operator+=(const PadicInt& other);
    PadicInt& operator-=(const PadicInt& other);
    PadicInt& operator*=(const PadicInt& other);
    friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
    friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
    friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }

    PadicInt pow(const mpz_class& exponent) const;

    /// Same digits read in another precision (truncating or zero-extending).
    PadicInt with_precision(int precision) const;

    bool operator==(const PadicInt& other) const;

    std::string to_string() const { return residue_.get_str(); }

private:
    void check_context(const PadicInt& other) const;

    PadicContext ctx_;
    mpz_class residue_;
};

std::ostream& operator<<(std::ostream& os, const PadicInt& a);

Valuation valuation(const PadicInt& a);
PadicInt unit_inverse(const PadicInt& a);

/// Parses a decimal integer string (optional sign). Throws ParseError.
mpz_class parse_integer(const std::string& text);

}  // namespace iwalab
