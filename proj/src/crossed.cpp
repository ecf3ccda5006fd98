#include "iwalab/crossed.hpp"

#include <algorithm>
#include <functional>

#include "iwalab/detail/ring.hpp"

namespace iwalab {

using detail::Coeffs;
using detail::ResidueRing;

namespace {

// Elements of R_m = Z_p[C_q] (q = p^m) in the group basis h^0, ..., h^{q-1},
// h = 1 + Y. Multiplication is cyclic convolution and sigma^k permutes the
// basis, h^b -> h^{b e} with e = kappa^k mod q.
using GroupElem = Coeffs;
using GroupMatrix = std::vector<GroupElem>;  // d x d, row-major

GroupElem cyclic_mul(const GroupElem& a, const GroupElem& b, const ResidueRing& ring) {
    const std::size_t q = a.size();
    GroupElem r(q);
    for (std::size_t i = 0; i < q; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < q; ++j) {
            if (b[j] == 0) continue;
            std::size_t k = i + j;
            if (k >= q) k -= q;
            mpz_addmul(r[k].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    for (auto& c : r) ring.reduce(c);
    return r;
}

GroupElem permute(const GroupElem& a, unsigned long e) {
    const std::size_t q = a.size();
    GroupElem r(q);
    for (std::size_t b = 0; b < q; ++b) r[(b * e) % q] += a[b];
    return r;
}

// sum_k c_k Y^k with Y = h - 1, for c already reduced modulo omega_m.
GroupElem to_group_basis(const Coeffs& y, std::size_t q, const ResidueRing& ring) {
    GroupElem acc(q);
    for (std::size_t k = y.size(); k-- > 0;) {
        GroupElem next(q);
        for (std::size_t b = 0; b < q; ++b) {
            next[(b + 1) % q] += acc[b];
            next[b] -= acc[b];
        }
        next[0] += y[k];
        for (auto& c : next) ring.reduce(c);
        acc = std::move(next);
    }
    return acc;
}

// sum_b a_b (1+Y)^b expanded in powers of Y.
Coeffs from_group_basis(const GroupElem& a, const ResidueRing& ring) {
    const std::size_t q = a.size();
    Coeffs y(q);
    for (std::size_t b = 0; b < q; ++b) {
        if (a[b] == 0) continue;
        mpz_class binom = 1;
        for (std::size_t j = 0; j <= b; ++j) {
            mpz_addmul(y[j].get_mpz_t(), a[b].get_mpz_t(), binom.get_mpz_t());
            binom *= static_cast<unsigned long>(b - j);
            binom /= static_cast<unsigned long>(j + 1);
        }
    }
    for (auto& c : y) ring.reduce(c);
    return y;
}

GroupMatrix group_mul(const GroupMatrix& x, const GroupMatrix& y, std::size_t d, const ResidueRing& ring) {
    const std::size_t q = x.front().size();
    GroupMatrix z(d * d, GroupElem(q));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            GroupElem& acc = z[i * d + j];
            for (std::size_t k = 0; k < d; ++k) {
                GroupElem t = cyclic_mul(x[i * d + k], y[k * d + j], ring);
                for (std::size_t b = 0; b < q; ++b) acc[b] += t[b];
            }
            for (auto& c : acc) ring.reduce(c);
        }
    return z;
}

GroupMatrix group_sigma(const GroupMatrix& x, unsigned long e) {
    GroupMatrix r;
    r.reserve(x.size());
    for (const auto& a : x) r.push_back(permute(a, e));
    return r;
}

unsigned long kappa_power_mod(const mpz_class& kappa, const mpz_class& k, std::size_t q) {
    mpz_class r;
    mpz_class mod(static_cast<unsigned long>(q));
    mpz_powm(r.get_mpz_t(), kappa.get_mpz_t(), k.get_mpz_t(), mod.get_mpz_t());
    return r.get_ui();
}

// The cocycle A^(k) = sigma^{k-1}(A) ... sigma(A) A, by double-and-add on
// A^(a+b) = sigma^b(A^(a)) A^(b).
GroupMatrix cocycle(const GroupMatrix& a, std::size_t d, const mpz_class& kappa, const mpz_class& k,
                    const ResidueRing& ring) {
    const std::size_t q = a.front().size();
    if (k == 0) {
        GroupMatrix id(d * d, GroupElem(q));
        for (std::size_t i = 0; i < d; ++i) id[i * d + i][0] = ring.one();
        return id;
    }
    GroupMatrix cur = a;
    mpz_class e = 1;
    const unsigned long kappa_mod_q = kappa_power_mod(kappa, 1, q);
    for (std::size_t bit = mpz_sizeinbase(k.get_mpz_t(), 2) - 1; bit-- > 0;) {
        cur = group_mul(group_sigma(cur, kappa_power_mod(kappa, e, q)), cur, d, ring);
        e *= 2;
        if (mpz_tstbit(k.get_mpz_t(), bit)) {
            cur = group_mul(group_sigma(cur, kappa_mod_q), a, d, ring);
            e += 1;
        }
    }
    return cur;
}

mpz_class p_power(const mpz_class& p, int n) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
    return r;
}

// A with entries in R_m, from integer data (over Z) or from the series (mod p^N).
GroupMatrix group_entries(const CrossedModule& x, int m, bool integral) {
    const std::size_t q = level_size(x.context().prime(), m);
    GroupMatrix out;
    if (integral) {
        const ResidueRing z{0};
        const Coeffs w = detail::omega_poly(q, z);
        for (const auto& e : *x.integer_entries()) {
            Coeffs r = detail::poly_mod_monic(e, w, z);
            r.resize(q);
            out.push_back(to_group_basis(r, q, z));
        }
    } else {
        const ResidueRing ring{x.context().modulus()};
        for (const auto& e : x.entries()) out.push_back(to_group_basis(reduce_mod_omega(e, m), q, ring));
    }
    return out;
}

mpz_class kappa_representative(const CrossedModule& x, int m) {
    if (x.integer_kappa()) return *x.integer_kappa();
    if (m > x.context().precision())
        throw Error(Errc::PrecisionExhausted, "kappa is known only modulo p^" + std::to_string(x.context().precision()));
    return x.kappa().residue();
}

EulerResult exists(long exponent, int precision) {
    EulerResult r;
    r.status = EulerStatus::Exists;
    r.chi_exponent = exponent;
    r.h0_exponent = exponent;
    r.h1_exponent = 0;
    r.precision = precision;
    return r;
}

EulerResult undecided(int precision, std::optional<bool> exactly_singular) {
    EulerResult r;
    r.precision = precision;
    if (exactly_singular && *exactly_singular) r.status = EulerStatus::NotFiniteDetected;
    return r;
}

EulerResult from_smith(const PadicMatrix& c, const std::function<std::optional<bool>()>& exact_test) {
    HomologyOrders h = cokernel_kernel_orders(smith_form(c));
    if (h.h0.determinate) return exists(h.h0.exponent, c.context().precision());
    return undecided(c.context().precision(), exact_test());
}

}  // namespace

CrossedModule::CrossedModule(std::size_t d, PadicInt kappa, std::vector<PowerSeries> entries,
                             std::optional<std::vector<IntPoly>> integer, std::optional<mpz_class> integer_kappa)
    : d_(d),
      kappa_(std::move(kappa)),
      entries_(std::move(entries)),
      integer_(std::move(integer)),
      integer_kappa_(std::move(integer_kappa)) {
    if ((kappa_ - PadicInt::one(kappa_.context())).valuation() < Valuation::finite(1))
        throw Error(Errc::ValidationError, "kappa in 1 + pZ_p: v_p(kappa - 1) = 0");
    std::vector<mpz_class> constant;
    for (const auto& e : entries_) constant.push_back(e.residues().front());
    if (!determinant(PadicMatrix::from_integers(kappa_.context(), d_, d_, constant)).is_unit())
        throw Error(Errc::ValidationError, "unit determinant: det A(Y=0) is divisible by p");
}

CrossedModule CrossedModule::from_integers(const PadicContext& ctx, std::size_t d, const mpz_class& kappa,
                                           const std::vector<IntPoly>& entries) {
    if (d == 0 || entries.size() != d * d)
        throw Error(Errc::InvalidArgument, "action matrix must be a nonempty square matrix");
    std::vector<IntPoly> ints;
    std::vector<PowerSeries> series;
    for (const auto& e : entries) {
        IntPoly c = e.empty() ? IntPoly{0} : e;
        detail::trim(c);
        series.push_back(PowerSeries::polynomial(ctx, c, Variable::Y));
        ints.push_back(std::move(c));
    }
    return CrossedModule(d, PadicInt(ctx, kappa), std::move(series), std::move(ints), kappa);
}

CrossedModule CrossedModule::from_series(std::size_t d, const PadicInt& kappa, const std::vector<PowerSeries>& entries) {
    if (d == 0 || entries.size() != d * d)
        throw Error(Errc::InvalidArgument, "action matrix must be a nonempty square matrix");
    for (const auto& e : entries) {
        if (!(e.context() == kappa.context())) throw Error(Errc::MixedContext, "entry from a different context");
        if (e.var() != Variable::Y) throw Error(Errc::InvalidArgument, "action matrix entries must be series in Y");
    }
    return CrossedModule(d, kappa, entries, std::nullopt, std::nullopt);
}

Level CrossedModule::level(int n, int m) const {
    if (n < 0 || m < 0) throw Error(Errc::ValidationError, "level indices must be nonnegative");
    long v;
    if (integer_kappa_) {
        mpz_class t = *integer_kappa_ - 1;
        if (t == 0) return {n, m};
        v = static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), context().prime().get_mpz_t()));
    } else {
        v = (kappa_ - PadicInt::one(context())).valuation().value();
    }
    if (m > n + v)
        throw Error(Errc::ValidationError, "normality: level (" + std::to_string(n) + "," + std::to_string(m) +
                                               ") needs m <= n + v_p(kappa - 1) = " + std::to_string(n + v));
    return {n, m};
}

CrossedModule CrossedModule::with_precision(int precision) const {
    const PadicContext ctx = context().with_precision(precision);
    if (integer_ && integer_kappa_) return from_integers(ctx, d_, *integer_kappa_, *integer_);
    std::vector<PowerSeries> e;
    for (const auto& s : entries_) e.push_back(s.with_precision(precision));
    return CrossedModule(d_, kappa_.with_precision(precision), std::move(e), std::nullopt, std::nullopt);
}

PowerSeries sigma_power(const PowerSeries& f, const PadicInt& kappa, const mpz_class& k, int m) {
    const PadicContext& ctx = f.context();
    if (!(kappa.context() == ctx)) throw Error(Errc::MixedContext, "kappa from a different context");
    if (k < 0) throw Error(Errc::InvalidArgument, "sigma_power needs k >= 0");
    if (m > ctx.precision()) throw Error(Errc::PrecisionExhausted, "kappa is known only modulo p^N");
    const std::size_t q = level_size(ctx.prime(), m);
    const ResidueRing ring{ctx.modulus()};
    GroupElem g = to_group_basis(reduce_mod_omega(f, m), q, ring);
    GroupElem s = permute(g, kappa_power_mod(kappa.residue(), k, q));
    return PowerSeries::polynomial(ctx, from_group_basis(s, ring), f.var());
}

LevelOperator level_operator(const CrossedModule& x, const Level& level) {
    const PadicContext& ctx = x.context();
    const std::size_t d = x.rank();
    const std::size_t q = level_size(ctx.prime(), level.m);
    const bool integral = x.integer_entries() && x.integer_kappa();
    const ResidueRing ring = integral ? ResidueRing{0} : ResidueRing{ctx.modulus()};
    GroupMatrix a = group_entries(x, level.m, integral);
    GroupMatrix ap = cocycle(a, d, kappa_representative(x, level.m), p_power(ctx.prime(), level.n), ring);

    LevelOperator op{level, PadicMatrix(ctx, d * q, d * q), std::nullopt};
    IntMatrix bi(d * q, d * q);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t b = 0; b < q; ++b)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t c = 0; c < q; ++c) {
                    const mpz_class& v = ap[i * d + j][(c + q - b) % q];
                    op.b.set_residue(i * q + b, j * q + c, v);
                    if (integral) bi.at(i * q + b, j * q + c) = v;
                }
    if (integral) op.integer = std::move(bi);
    return op;
}

PadicMatrix gamma_power_matrix(const CrossedModule& x, const Level& level) { return level_operator(x, level).b; }

AkashiPoly akashi_series(const LevelOperator& op) {
    const PadicContext& ctx = op.b.context();
    const ResidueRing ring{ctx.modulus()};
    Coeffs cp = detail::berkowitz(op.b.residues(), op.b.rows(), ring);
    Coeffs ak = detail::poly_substitute_linear(cp, 1, 1, 0, ring);
    AkashiPoly out{op.level, PowerSeries::polynomial(ctx, ak), std::nullopt};
    if (op.integer) {
        IntPoly ci = characteristic_polynomial(*op.integer);
        out.integer = detail::poly_substitute_linear(ci, 1, 1, 0, ResidueRing{0});
    }
    return out;
}

AkashiPoly akashi_series(const CrossedModule& x, const Level& level) {
    return akashi_series(level_operator(x, level));
}

EulerResult euler_characteristic_crossed(const LevelOperator& op, const Character& rho) {
    const PadicContext& ctx = op.b.context();
    const mpz_class e = p_power(ctx.prime(), op.level.n);
    const PadicInt up = rho.u().pow(e);
    const std::size_t dim = op.b.rows();
    PadicMatrix c(ctx, dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            mpz_class v = up.residue() * op.b.residue(i, j);
            if (i == j) v -= 1;
            c.set_residue(i, j, v);
        }
    return from_smith(c, [&]() -> std::optional<bool> {
        if (!op.integer || !rho.integer()) return std::nullopt;
        mpz_class ue;
        mpz_pow_ui(ue.get_mpz_t(), rho.integer()->get_mpz_t(), e.get_ui());
        IntMatrix ci = *op.integer;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                ci.at(i, j) *= ue;
                if (i == j) ci.at(i, j) -= 1;
            }
        return determinant_is_zero(ci);
    });
}

EulerResult euler_characteristic_crossed(const CrossedModule& x, const Character& rho, const Level& level) {
    return euler_characteristic_crossed(level_operator(x, level), rho);
}

EulerResult euler_via_akashi(const AkashiPoly& ak, const Character& rho) {
    const PadicContext& ctx = ak.poly.context();
    const mpz_class e = p_power(ctx.prime(), ak.level.n);
    const Character rho_e = rho.power(e);
    Valuation v = evaluate_character(ak.poly, rho_e, Direction::Inverse).valuation();
    if (v.is_finite()) return exists(v.value(), ctx.precision());
    std::optional<bool> singular;
    if (ak.integer && rho_e.integer()) {
        // Ak(w^{-1} - 1) w^D = sum_k c_k w^{D-k} with c the coefficients of Ak(X - 1).
        const IntPoly c = detail::poly_substitute_linear(*ak.integer, -1, 1, 0, ResidueRing{0});
        mpz_class acc = 0;
        for (const auto& ck : c) acc = acc * *rho_e.integer() + ck;
        singular = acc == 0;
    }
    return undecided(ctx.precision(), singular);
}

EulerResult euler_via_akashi(const CrossedModule& x, const Character& rho, const Level& level) {
    return euler_via_akashi(akashi_series(x, level), rho);
}

EulerResult group_ring_oracle(const CrossedModule& x, const Character& rho, const Level& level, std::size_t size_cap) {
    const PadicContext& ctx = x.context();
    const std::size_t d = x.rank();
    const std::size_t np = level_size(ctx.prime(), level.n);
    const std::size_t q = level_size(ctx.prime(), level.m);
    const std::size_t group = np * q;
    if (d * group > size_cap)
        throw Error(Errc::SizeCapExceeded, "group ring presentation has rank " + std::to_string(d * group) +
                                               " > cap " + std::to_string(size_cap));
    const bool integral = x.integer_entries() && x.integer_kappa() && rho.integer();
    const ResidueRing ring = integral ? ResidueRing{0} : ResidueRing{ctx.modulus()};
    const GroupMatrix a = group_entries(x, level.m, integral);
    const mpz_class u = integral ? *rho.integer() : rho.u().residue();

    // g^{-1} h g = h^{kappa^{-1}}, so h^b g = g h^{b kappa^{-1}}.
    mpz_class kinv, qz(static_cast<unsigned long>(q));
    mpz_invert(kinv.get_mpz_t(), kappa_representative(x, level.m).get_mpz_t(), qz.get_mpz_t());
    if (q == 1) kinv = 0;
    const unsigned long kinv_mod = kinv.get_ui();

    const std::size_t dim = d * group;
    IntMatrix m(dim, dim);
    auto index = [&](std::size_t i, std::size_t ga, std::size_t hb) { return i * group + ga * q + hb; };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t ga = 0; ga < np; ++ga)
            for (std::size_t hb = 0; hb < q; ++hb) {
                const std::size_t row = index(i, ga, hb);
                m.at(row, index(i, (ga + 1) % np, (hb * kinv_mod) % q)) += 1;
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t c = 0; c < q; ++c) {
                        const mpz_class& coef = a[i * d + j][c];
                        if (coef == 0) continue;
                        mpz_submul(m.at(row, index(j, ga, (hb + c) % q)).get_mpz_t(), u.get_mpz_t(),
                                   coef.get_mpz_t());
                    }
            }
    PadicMatrix pm = PadicMatrix::from_integers(ctx, dim, dim, m.data);
    return from_smith(pm, [&]() -> std::optional<bool> {
        if (!integral) return std::nullopt;
        return determinant_is_zero(m);
    });
}

TwistSearchReport search_twist_crossed(const CrossedModule& x, const std::vector<Level>& levels,
                                       const TwistSearchOptions& options) {
    std::vector<LevelOperator> ops;
    for (const auto& l : levels) ops.push_back(level_operator(x, x.level(l.n, l.m)));
    std::vector<std::optional<AkashiPoly>> aks(ops.size());

    TwistSearchReport report;
    for (const auto& u : twist_candidates(x.context().prime(), options)) {
        Character rho = Character::from_integer(x.context(), u);
        CandidateRecord rec;
        rec.u = u;
        bool ok = true;
        for (std::size_t k = 0; k < ops.size() && ok; ++k) {
            LevelCertificate cert;
            cert.n = ops[k].level.n;
            cert.m = ops[k].level.m;
            cert.result = euler_characteristic_crossed(ops[k], rho);
            if (!aks[k]) aks[k] = akashi_series(ops[k]);
            cert.cross_check = euler_via_akashi(*aks[k], rho);
            ok = cert.result.exists();
            rec.levels.push_back(cert);
        }
        rec.accepted = ok;
        report.candidates.push_back(std::move(rec));
        if (ok) {
            report.accepted = report.candidates.size() - 1;
            break;
        }
    }
    return report;
}

Character find_twist_crossed(const CrossedModule& x, const std::vector<Level>& levels,
                             const TwistSearchOptions& options, TwistSearchReport* report) {
    TwistSearchReport r = search_twist_crossed(x, levels, options);
    if (report) *report = r;
    if (!r.winner())
        throw Error(Errc::BudgetExhausted, "no candidate among " + std::to_string(r.candidates.size()) +
                                               " certifies every requested level");
    return Character::from_integer(x.context(), r.winner()->u);
}

}  // namespace iwalab
