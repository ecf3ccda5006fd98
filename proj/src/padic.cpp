#include "iwalab/padic.hpp"

#include <ostream>

namespace iwalab {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::MixedContext: return "MixedContext";
    case Errc::NotSquare: return "NotSquare";
    case Errc::DivisorDivisibleByP: return "DivisorDivisibleByP";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::ZeroToPrecision: return "ZeroToPrecision";
    case Errc::TailUncertified: return "TailUncertified";
    case Errc::ZeroDeterminant: return "ZeroDeterminant";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::SizeCapExceeded: return "SizeCapExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::CommandMismatch: return "CommandMismatch";
    }
    return "Unknown";
}

PadicContext::PadicContext(const mpz_class& p, int precision) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0) {
        throw Error(Errc::InvalidArgument, "p must be an odd prime, got " + p.get_str());
    }
    if (precision < 1) {
        throw Error(Errc::InvalidArgument, "precision N must be >= 1, got " + std::to_string(precision));
    }
    auto data = std::make_shared<Data>();
    data->p = p;
    data->n = precision;
    mpz_pow_ui(data->modulus.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));
    data->half = data->modulus / 2;
    data->small_p = mpz_fits_ulong_p(p.get_mpz_t()) ? mpz_get_ui(p.get_mpz_t()) : 0;
    data_ = std::move(data);
}

mpz_class PadicContext::reduce(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), data_->modulus.get_mpz_t());
    return r;
}

void PadicContext::reduce_in_place(mpz_class& x) const {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), data_->modulus.get_mpz_t());
}

mpz_class PadicContext::balanced(const mpz_class& residue) const {
    mpz_class r = reduce(residue);
    if (r > data_->half) r -= data_->modulus;
    return r;
}

bool PadicContext::operator==(const PadicContext& other) const noexcept {
    return data_ == other.data_ || (data_->n == other.data_->n && data_->p == other.data_->p);
}

std::string Valuation::to_string() const {
    return at_least_ ? ">=" + std::to_string(value_) : std::to_string(value_);
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.to_string(); }

Valuation valuation_of(const PadicContext& ctx, const mpz_class& residue) {
    if (residue == 0) return Valuation::at_least(ctx.precision());
    mpz_class rest;
    auto e = static_cast<long>(mpz_remove(rest.get_mpz_t(), residue.get_mpz_t(), ctx.prime().get_mpz_t()));
    return e >= ctx.precision() ? Valuation::at_least(ctx.precision()) : Valuation::finite(e);
}

PadicInt::PadicInt(const PadicContext& ctx, const mpz_class& value) : ctx_(ctx), residue_(ctx.reduce(value)) {}

void PadicInt::check_context(const PadicInt& other) const {
    if (!(ctx_ == other.ctx_)) throw Error(Errc::MixedContext, "p-adic operands live in different contexts");
}

PadicInt PadicInt::operator-() const {
    PadicInt r(*this);
    if (r.residue_ != 0) r.residue_ = ctx_.modulus() - r.residue_;
    return r;
}

PadicInt& PadicInt::operator+=(const PadicInt& other) {
    check_context(other);
    residue_ += other.residue_;
    if (residue_ >= ctx_.modulus()) residue_ -= ctx_.modulus();
    return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& other) {
    check_context(other);
    residue_ -= other.residue_;
    if (residue_ < 0) residue_ += ctx_.modulus();
    return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& other) {
    check_context(other);
    residue_ *= other.residue_;
    ctx_.reduce_in_place(residue_);
    return *this;
}

PadicInt PadicInt::pow(const mpz_class& exponent) const {
    if (exponent < 0) return unit_inverse(*this).pow(-exponent);
    PadicInt r(ctx_, 0L);
    mpz_powm(r.residue_.get_mpz_t(), residue_.get_mpz_t(), exponent.get_mpz_t(), ctx_.modulus().get_mpz_t());
    return r;
}

PadicInt PadicInt::with_precision(int precision) const {
    return PadicInt(ctx_.with_precision(precision), residue_);
}

bool PadicInt::operator==(const PadicInt& other) const {
    return ctx_ == other.ctx_ && residue_ == other.residue_;
}

std::ostream& operator<<(std::ostream& os, const PadicInt& a) { return os << a.residue(); }

Valuation valuation(const PadicInt& a) { return a.valuation(); }

PadicInt unit_inverse(const PadicInt& a) {
    mpz_class inv;
    if (a.valuation() != Valuation::finite(0) ||
        mpz_invert(inv.get_mpz_t(), a.residue().get_mpz_t(), a.context().modulus().get_mpz_t()) == 0) {
        throw Error(Errc::NotAUnit, a.to_string() + " is not a unit modulo p^N");
    }
    return PadicInt(a.context(), inv);
}

mpz_class parse_integer(const std::string& text) {
    std::string s = text;
    // U+2212 MINUS SIGN is accepted as a leading sign.
    if (s.rfind("\xE2\x88\x92", 0) == 0) s.replace(0, 3, "-");
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    bool ok = !s.empty();
    for (size_t i = 0; i < s.size() && ok; ++i) {
        char c = s[i];
        ok = (c >= '0' && c <= '9') || (i == 0 && c == '-' && s.size() > 1);
    }
    if (!ok) throw Error(Errc::ParseError, "not a decimal integer: \"" + text + "\"");
    return mpz_class(s, 10);
}

}  // namespace iwalab
