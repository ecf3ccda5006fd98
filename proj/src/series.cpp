#include "iwalab/series.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <utility>

#include "iwalab/detail/ring.hpp"

namespace iwalab {

using detail::Coeffs;
using detail::ResidueRing;

namespace {

ResidueRing ring_of(const PadicContext& ctx) { return ResidueRing{ctx.modulus()}; }

bool is_unit_residue(const PadicContext& ctx, const mpz_class& x) {
    return valuation_of(ctx, x) == Valuation::finite(0);
}

std::size_t first_unit_index(const PadicContext& ctx, const Coeffs& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
        if (is_unit_residue(ctx, c[i])) return i;
    return c.size();
}

Coeffs padded(Coeffs c, std::size_t n) {
    c.resize(n);
    return c;
}

// Inverse of v in (Z/p^N)[X]/(P) for monic P congruent to X^lambda mod p and
// v with a unit constant term. Newton iteration y <- y(2 - v*y).
Coeffs inverse_mod_monic(const Coeffs& v, const Coeffs& monic, const ResidueRing& ring, int precision) {
    const Coeffs vr = detail::poly_mod_monic(v, monic, ring);
    mpz_class inv0;
    mpz_invert(inv0.get_mpz_t(), vr[0].get_mpz_t(), ring.modulus.get_mpz_t());
    Coeffs y{inv0};
    const std::size_t lambda = monic.size() - 1;
    // e_0 lies in (p, X); (p, X)^lambda is inside (p), so squaring log2(lambda*N)+2 times suffices.
    int rounds = 2;
    for (std::size_t need = lambda * static_cast<std::size_t>(precision) + 1; need > 1; need = (need + 1) / 2) ++rounds;
    for (int it = 0; it < rounds; ++it) {
        Coeffs vy = detail::poly_mod_monic(detail::poly_mul(vr, y, ring), monic, ring);
        Coeffs two_minus(vy.size());
        for (std::size_t i = 0; i < vy.size(); ++i) {
            two_minus[i] = -vy[i];
            ring.reduce(two_minus[i]);
        }
        two_minus[0] += 2;
        ring.reduce(two_minus[0]);
        y = detail::poly_mod_monic(detail::poly_mul(y, two_minus, ring), monic, ring);
    }
    return y;
}

struct Factorization {
    Coeffs distinguished;  // monic, degree lambda
    Coeffs unit;
};

// Splits a polynomial g whose first unit coefficient sits at index lambda into
// g = P*V with P distinguished of degree lambda (Hensel lifting of the
// coprime factorization X^lambda * (g/X^lambda) mod p).
Factorization distinguished_factor(Coeffs g, std::size_t lambda, const ResidueRing& ring, int precision) {
    detail::trim(g);
    if (lambda == 0) return {Coeffs{1}, g};
    Coeffs p(lambda + 1);
    p[lambda] = 1;
    for (int it = 0; it < 2 * precision + 8; ++it) {
        auto [v, r] = detail::poly_divmod_monic(g, p, ring);
        if (std::all_of(r.begin(), r.end(), [](const mpz_class& c) { return c == 0; })) {
            detail::trim(v);
            return {p, v};
        }
        Coeffs w = inverse_mod_monic(v, p, ring, precision);
        Coeffs delta = detail::poly_mod_monic(detail::poly_mul(r, w, ring), p, ring);
        for (std::size_t i = 0; i < lambda && i < delta.size(); ++i) {
            p[i] += delta[i];
            ring.reduce(p[i]);
        }
    }
    throw Error(Errc::PrecisionExhausted, "Weierstrass factorization did not converge");
}

}  // namespace

PowerSeries::PowerSeries(const PadicContext& ctx, std::vector<mpz_class> coeffs, Variable var, bool exact)
    : ctx_(ctx), var_(var), coeffs_(std::move(coeffs)), exact_(exact) {
    if (coeffs_.empty()) {
        if (!exact_) throw Error(Errc::InvalidArgument, "truncated series needs order >= 1");
        coeffs_.emplace_back(0);
    }
    for (auto& c : coeffs_) ctx_.reduce_in_place(c);
    if (exact_) detail::trim(coeffs_);
}

PowerSeries PowerSeries::polynomial(const PadicContext& ctx, const std::vector<mpz_class>& coeffs, Variable var) {
    return PowerSeries(ctx, coeffs, var, true);
}

PowerSeries PowerSeries::polynomial(const PadicContext& ctx, const std::vector<PadicInt>& coeffs, Variable var) {
    std::vector<mpz_class> raw;
    raw.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        if (!(c.context() == ctx)) throw Error(Errc::MixedContext, "coefficient from a different context");
        raw.push_back(c.residue());
    }
    return PowerSeries(ctx, std::move(raw), var, true);
}

PowerSeries PowerSeries::truncated(const PadicContext& ctx, const std::vector<mpz_class>& coeffs, Variable var) {
    return PowerSeries(ctx, coeffs, var, false);
}

PowerSeries PowerSeries::constant(const PadicContext& ctx, const mpz_class& c, Variable var) {
    return PowerSeries(ctx, {c}, var, true);
}

PowerSeries PowerSeries::variable(const PadicContext& ctx, Variable var) {
    return PowerSeries(ctx, {0, 1}, var, true);
}

std::optional<std::size_t> PowerSeries::exact_degree() const {
    if (!exact_) return std::nullopt;
    return coeffs_.size() - 1;
}

PadicInt PowerSeries::coeff(std::size_t i) const {
    if (i < coeffs_.size()) return PadicInt(ctx_, coeffs_[i]);
    if (exact_) return PadicInt::zero(ctx_);
    throw Error(Errc::PrecisionExhausted, "coefficient " + std::to_string(i) + " lies past the truncation order " +
                                              std::to_string(coeffs_.size()));
}

bool PowerSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpz_class& c) { return c == 0; });
}

void check_compatible(const PowerSeries& a, const PowerSeries& b) {
    if (!(a.ctx_ == b.ctx_)) throw Error(Errc::MixedContext, "series live in different contexts");
    if (a.var_ != b.var_) throw Error(Errc::MixedContext, "series in different variables");
}

namespace {

std::size_t combined_order(const PowerSeries& a, const PowerSeries& b) {
    std::size_t k = std::numeric_limits<std::size_t>::max();
    if (!a.is_exact()) k = std::min(k, a.order());
    if (!b.is_exact()) k = std::min(k, b.order());
    return k;
}

}  // namespace

PowerSeries PowerSeries::operator-() const {
    Coeffs c = coeffs_;
    for (auto& x : c) x = -x;
    return PowerSeries(ctx_, std::move(c), var_, exact_);
}

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    check_compatible(a, b);
    const ResidueRing ring = ring_of(a.ctx_);
    if (a.exact_ && b.exact_) return PowerSeries(a.ctx_, detail::poly_add(a.coeffs_, b.coeffs_, ring), a.var_, true);
    const std::size_t k = combined_order(a, b);
    return PowerSeries(a.ctx_, padded(detail::poly_add(padded(a.coeffs_, k), padded(b.coeffs_, k), ring), k), a.var_,
                       false);
}

PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) { return a + (-b); }

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    check_compatible(a, b);
    const ResidueRing ring = ring_of(a.ctx_);
    if (a.exact_ && b.exact_) return PowerSeries(a.ctx_, detail::poly_mul(a.coeffs_, b.coeffs_, ring), a.var_, true);
    const std::size_t k = combined_order(a, b);
    return PowerSeries(a.ctx_, padded(detail::poly_mul_trunc(a.coeffs_, b.coeffs_, k, ring), k), a.var_, false);
}

PowerSeries PowerSeries::scaled(const PadicInt& c) const {
    if (!(c.context() == ctx_)) throw Error(Errc::MixedContext, "scalar from a different context");
    Coeffs r = coeffs_;
    for (auto& x : r) x *= c.residue();
    return PowerSeries(ctx_, std::move(r), var_, exact_);
}

PowerSeries PowerSeries::truncate(std::size_t order) const {
    if (!exact_ && order > coeffs_.size())
        throw Error(Errc::PrecisionExhausted, "cannot widen a series truncated at order " +
                                                  std::to_string(coeffs_.size()));
    return PowerSeries(ctx_, padded(coeffs_, order), var_, false);
}

PowerSeries PowerSeries::with_precision(int precision) const {
    return PowerSeries(ctx_.with_precision(precision), coeffs_, var_, exact_);
}

bool PowerSeries::operator==(const PowerSeries& other) const {
    return ctx_ == other.ctx_ && var_ == other.var_ && exact_ == other.exact_ && coeffs_ == other.coeffs_;
}

std::string PowerSeries::to_string() const {
    std::ostringstream os;
    const char* v = var_ == Variable::X ? "X" : "Y";
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        mpz_class c = ctx_.balanced(coeffs_[i]);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        mpz_class a = abs(c);
        if (i == 0) os << a;
        else {
            if (a != 1) os << a << "*";
            os << v;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    if (!exact_) os << " + O(" << v << "^" << coeffs_.size() << ")";
    return os.str();
}

Character::Character(const PadicInt& u) : u_(u) {
    if (!(u_ - PadicInt::one(u_.context())).valuation().is_at_least_n() &&
        (u_ - PadicInt::one(u_.context())).valuation().value() < 1)
        throw Error(Errc::InvalidArgument, "a character of Gamma takes values in 1 + pZ_p; got u = " + u.to_string());
}

Character Character::from_integer(const PadicContext& ctx, const mpz_class& u) {
    Character c{PadicInt(ctx, u)};
    c.integer_ = u;
    return c;
}

Character Character::power(const mpz_class& k) const {
    Character c{u_.pow(k)};
    if (integer_ && k >= 0 && k.fits_ulong_p()) {
        mpz_class v;
        mpz_pow_ui(v.get_mpz_t(), integer_->get_mpz_t(), k.get_ui());
        c.integer_ = v;
    }
    return c;
}

Character Character::with_precision(int precision) const {
    if (integer_) return from_integer(u_.context().with_precision(precision), *integer_);
    return Character(u_.with_precision(precision));
}

namespace {

// Modulo a distinguished polynomial of degree lambda, X^k lies in p^{floor(k/lambda)},
// so the unknown tail of a truncated series is invisible only when order >= lambda N.
void require_certified(const PowerSeries& f, std::size_t lambda, const char* what) {
    if (f.is_exact() || lambda == 0) return;
    const std::size_t need = lambda * static_cast<std::size_t>(f.context().precision());
    if (f.order() < need)
        throw Error(Errc::PrecisionExhausted, std::string(what) + " truncated at order " + std::to_string(f.order()) +
                                                  " (lambda = " + std::to_string(lambda) + " needs order >= " +
                                                  std::to_string(need) + ")");
}

// A truncated series whose known coefficients are all divisible by p may
// still have a unit coefficient in its tail.
void require_known_mu(const PowerSeries& f, long mu) {
    if (!f.is_exact() && mu > 0)
        throw Error(Errc::PrecisionExhausted, "mu > 0 is not certified by a series truncated at order " +
                                                  std::to_string(f.order()));
}

}  // namespace

WeierstrassQuotient weierstrass_divide(const PowerSeries& f, const PowerSeries& g) {
    check_compatible(f, g);
    const PadicContext& ctx = f.context();
    const ResidueRing ring = ring_of(ctx);
    const std::size_t lambda = first_unit_index(ctx, g.residues());
    if (lambda == g.residues().size())
        throw Error(Errc::DivisorDivisibleByP, "every known coefficient of the divisor is divisible by p");
    require_certified(f, lambda, "dividend");
    require_certified(g, lambda, "divisor");

    Factorization fac = distinguished_factor(g.residues(), lambda, ring, ctx.precision());
    auto [s, r] = detail::poly_divmod_monic(f.residues(), fac.distinguished, ring);
    PowerSeries remainder = PowerSeries::polynomial(ctx, r, f.var());

    // q = s / V
    if (f.is_exact() && g.is_exact() && fac.unit.size() == 1) {
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), fac.unit[0].get_mpz_t(), ctx.modulus().get_mpz_t());
        for (auto& c : s) c *= inv;
        return {PowerSeries::polynomial(ctx, s, f.var()), remainder};
    }
    std::size_t k = combined_order(f, g);
    if (k == std::numeric_limits<std::size_t>::max()) k = std::max(kDefaultSeriesOrder, s.size());
    Coeffs q = detail::poly_mul_trunc(s, detail::series_inverse(fac.unit, k, ring), k, ring);
    return {PowerSeries::truncated(ctx, padded(q, k), f.var()), remainder};
}

WeierstrassData weierstrass_prepare(const PowerSeries& f) {
    const PadicContext& ctx = f.context();
    const ResidueRing ring = ring_of(ctx);
    long mu = ctx.precision();
    for (const auto& c : f.residues()) {
        Valuation v = valuation_of(ctx, c);
        if (v.is_finite()) mu = std::min(mu, v.value());
    }
    if (mu == ctx.precision()) throw Error(Errc::ZeroToPrecision, "series vanishes modulo p^N");
    require_known_mu(f, mu);

    mpz_class pmu;
    mpz_pow_ui(pmu.get_mpz_t(), ctx.prime().get_mpz_t(), static_cast<unsigned long>(mu));
    Coeffs g = f.residues();
    for (auto& c : g) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pmu.get_mpz_t());
    const std::size_t lambda = first_unit_index(ctx, g);
    require_certified(f, lambda, "series");

    Factorization fac = distinguished_factor(g, lambda, ring, ctx.precision());
    PowerSeries dist = PowerSeries::polynomial(ctx, fac.distinguished, f.var());
    PowerSeries unit = f.is_exact() ? PowerSeries::polynomial(ctx, fac.unit, f.var())
                                    : PowerSeries::truncated(ctx, padded(fac.unit, f.order()), f.var());
    return {static_cast<int>(mu), dist, unit};
}

LambdaMu lambda_mu(const PowerSeries& f) {
    const PadicContext& ctx = f.context();
    long mu = ctx.precision();
    std::size_t lambda = 0;
    for (std::size_t i = 0; i < f.residues().size(); ++i) {
        Valuation v = valuation_of(ctx, f.residues()[i]);
        if (v.is_finite() && v.value() < mu) {
            mu = v.value();
            lambda = i;
        }
    }
    if (mu == ctx.precision()) throw Error(Errc::ZeroToPrecision, "series vanishes modulo p^N");
    require_known_mu(f, mu);
    return {lambda, static_cast<int>(mu)};
}

namespace {

PadicInt twist_point_scale(const Character& rho, Direction direction) {
    return direction == Direction::Forward ? rho.u() : unit_inverse(rho.u());
}

}  // namespace

PowerSeries twist_series(const PowerSeries& f, const Character& rho, Direction direction) {
    const PadicContext& ctx = f.context();
    if (!(rho.u().context() == ctx)) throw Error(Errc::MixedContext, "character from a different context");
    if (rho.is_trivial()) return f;
    const PadicInt a = twist_point_scale(rho, direction);
    const PadicInt shift = a - PadicInt::one(ctx);
    if (f.is_exact()) {
        Coeffs c = detail::poly_substitute_linear(f.residues(), shift.residue(), a.residue(), 0, ring_of(ctx));
        return PowerSeries::polynomial(ctx, c, f.var());
    }
    // An unknown coefficient of X^k (k >= order) reaches X^j through
    // shift^{k-j}, so X^j is certified only while (order - j) v(shift) >= N.
    const long v = shift.valuation().value();
    const long lost = (ctx.precision() + v - 1) / v - 1;
    if (static_cast<long>(f.order()) <= lost)
        throw Error(Errc::PrecisionExhausted, "twisting a series truncated at order " + std::to_string(f.order()) +
                                                  " leaves no certified coefficient");
    const std::size_t order = f.order() - static_cast<std::size_t>(lost);
    Coeffs c = detail::poly_substitute_linear(f.residues(), shift.residue(), a.residue(), order, ring_of(ctx));
    return PowerSeries::truncated(ctx, padded(c, order), f.var());
}

PadicInt evaluate_character(const PowerSeries& f, const Character& rho, Direction direction) {
    const PadicContext& ctx = f.context();
    if (!(rho.u().context() == ctx)) throw Error(Errc::MixedContext, "character from a different context");
    const PadicInt point = twist_point_scale(rho, direction) - PadicInt::one(ctx);
    const Valuation v = point.valuation();
    if (!f.is_exact() && v.is_finite() &&
        static_cast<long>(f.order()) * v.value() < static_cast<long>(ctx.precision())) {
        throw Error(Errc::TailUncertified, "tail of a series truncated at order " + std::to_string(f.order()) +
                                               " may reach p^" + std::to_string(f.order() * v.value()));
    }
    return PadicInt(ctx, detail::poly_evaluate(f.residues(), point.residue(), ring_of(ctx)));
}

std::size_t level_size(const mpz_class& p, int n) {
    if (n < 0) throw Error(Errc::InvalidArgument, "negative level");
    mpz_class s;
    mpz_pow_ui(s.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
    if (s > (mpz_class(1) << 24)) throw Error(Errc::InvalidArgument, "p^" + std::to_string(n) + " is too large");
    return s.get_ui();
}

PowerSeries omega(int n, const PadicContext& ctx, Variable var) {
    return PowerSeries::polynomial(ctx, detail::omega_poly(level_size(ctx.prime(), n), ring_of(ctx)), var);
}

std::vector<mpz_class> reduce_mod_omega(const PowerSeries& f, int n) {
    const PadicContext& ctx = f.context();
    const std::size_t size = level_size(ctx.prime(), n);
    // X^{k p^n} lies in p^k (Z_p[X]/omega_n): the unknown tail is invisible mod p^N
    // once order / p^n >= N.
    if (!f.is_exact() && f.order() / size < static_cast<std::size_t>(ctx.precision()))
        throw Error(Errc::PrecisionExhausted, "series truncated at order " + std::to_string(f.order()) +
                                                  " does not determine its class modulo omega_" + std::to_string(n) +
                                                  " (need order >= " + std::to_string(size * ctx.precision()) + ")");
    const ResidueRing ring = ring_of(ctx);
    Coeffs r = detail::poly_mod_monic(f.residues(), detail::omega_poly(size, ring), ring);
    return padded(std::move(r), size);
}

PadicMatrix mult_matrix_mod_omega(const PowerSeries& f, int n) {
    const PadicContext& ctx = f.context();
    const std::size_t size = level_size(ctx.prime(), n);
    const ResidueRing ring = ring_of(ctx);
    const Coeffs w = detail::omega_poly(size, ring);
    Coeffs row = reduce_mod_omega(f, n);
    PadicMatrix m(ctx, size, size);
    for (std::size_t k = 0; k < size; ++k) {
        for (std::size_t j = 0; j < size; ++j) m.set_residue(k, j, row[j]);
        if (k + 1 == size) break;
        // row <- X * row mod omega_n
        mpz_class top = row[size - 1];
        for (std::size_t j = size - 1; j > 0; --j) row[j] = row[j - 1];
        row[0] = 0;
        if (top != 0)
            for (std::size_t j = 0; j < size; ++j) {
                mpz_submul(row[j].get_mpz_t(), top.get_mpz_t(), w[j].get_mpz_t());
                ring.reduce(row[j]);
            }
    }
    return m;
}

PadicInt det_mult_mod_omega(const PowerSeries& f, int n) { return determinant(mult_matrix_mod_omega(f, n)); }

}  // namespace iwalab
