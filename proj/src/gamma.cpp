#include "iwalab/gamma.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "iwalab/detail/ring.hpp"
#include "iwalab/matrix.hpp"

namespace iwalab {

using detail::Coeffs;
using detail::PolyRing;
using detail::ResidueRing;

const char* to_string(EulerStatus status) noexcept {
    switch (status) {
        case EulerStatus::Exists: return "Exists";
        case EulerStatus::NotFiniteDetected: return "NotFiniteDetected";
        case EulerStatus::IndeterminateAtPrecision: return "IndeterminateAtPrecision";
    }
    return "?";
}

namespace {

IntPoly integer_determinant(const std::vector<IntPoly>& entries, std::size_t d) {
    Coeffs det = detail::berkowitz_determinant(entries, d, PolyRing{ResidueRing{0}, 0});
    detail::trim(det);
    return det;
}

bool is_zero_poly(const Coeffs& c) {
    return std::all_of(c.begin(), c.end(), [](const mpz_class& x) { return x == 0; });
}

// u^D * f(u^{-1}(1+X) - 1) for D >= deg f: an integer polynomial with the
// same vanishing behaviour as the inverse twist of f.
IntPoly integral_inverse_twist(const IntPoly& f, const mpz_class& u, std::size_t degree_bound) {
    Coeffs scaled(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        mpz_class w;
        mpz_pow_ui(w.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(degree_bound - k));
        scaled[k] = f[k] * w;
    }
    return detail::poly_substitute_linear(scaled, 1 - u, 1, 0, ResidueRing{0});
}

// Integer matrix of right multiplication by G on (Z[X]/omega_n)^d.
IntMatrix integer_mult_matrix(const std::vector<IntPoly>& g, std::size_t d, const mpz_class& p, int n) {
    const std::size_t size = level_size(p, n);
    const ResidueRing z{0};
    const Coeffs w = detail::omega_poly(size, z);
    IntMatrix out(d * size, d * size);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Coeffs row = detail::poly_mod_monic(g[i * d + j], w, z);
            row.resize(size);
            for (std::size_t k = 0; k < size; ++k) {
                for (std::size_t c = 0; c < size; ++c) out.at(i * size + k, j * size + c) = row[c];
                mpz_class top = row[size - 1];
                for (std::size_t c = size - 1; c > 0; --c) row[c] = row[c - 1];
                row[0] = 0;
                if (top != 0)
                    for (std::size_t c = 0; c < size; ++c) row[c] -= top * w[c];
            }
        }
    return out;
}

// Exact test: is multiplication by the rho-twisted presentation singular on
// (Lambda/omega_n)^d? Only answers for integral data.
std::optional<bool> twisted_presentation_singular(const std::vector<IntPoly>& entries, std::size_t d,
                                                  const Character& rho, const mpz_class& p, int n) {
    if (!rho.integer()) return std::nullopt;
    std::size_t degree = 0;
    for (const auto& e : entries) degree = std::max(degree, e.size() - 1);
    std::vector<IntPoly> twisted;
    twisted.reserve(entries.size());
    for (const auto& e : entries) twisted.push_back(integral_inverse_twist(e, *rho.integer(), degree));
    return determinant_is_zero(integer_mult_matrix(twisted, d, p, n));
}

EulerResult undecided(const GammaModule& m, const std::vector<IntPoly>* entries, std::size_t d, const Character& rho,
                      int n) {
    EulerResult r;
    r.precision = m.context().precision();
    if (entries) {
        auto singular = twisted_presentation_singular(*entries, d, rho, m.context().prime(), n);
        if (singular && *singular) r.status = EulerStatus::NotFiniteDetected;
    }
    return r;
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

}  // namespace

GammaModule::GammaModule(std::size_t d, std::vector<PowerSeries> entries, std::optional<std::vector<IntPoly>> integer)
    : d_(d), entries_(std::move(entries)), integer_(std::move(integer)) {}

GammaModule GammaModule::from_integers(const PadicContext& ctx, std::size_t d, const std::vector<IntPoly>& entries) {
    if (d == 0 || entries.size() != d * d)
        throw Error(Errc::InvalidArgument, "presentation must be a nonempty square matrix");
    std::vector<IntPoly> ints;
    std::vector<PowerSeries> series;
    for (const auto& e : entries) {
        IntPoly c = e.empty() ? IntPoly{0} : e;
        detail::trim(c);
        series.push_back(PowerSeries::polynomial(ctx, c));
        ints.push_back(std::move(c));
    }
    if (is_zero_poly(integer_determinant(ints, d)))
        throw Error(Errc::ValidationError, "torsion: det F vanishes, the module is not Lambda-torsion");
    return GammaModule(d, std::move(series), std::move(ints));
}

GammaModule GammaModule::from_series(std::size_t d, const std::vector<PowerSeries>& entries) {
    if (d == 0 || entries.size() != d * d)
        throw Error(Errc::InvalidArgument, "presentation must be a nonempty square matrix");
    for (const auto& e : entries) {
        check_compatible(entries.front(), e);
        if (e.var() != Variable::X) throw Error(Errc::InvalidArgument, "presentation entries must be series in X");
    }
    GammaModule m(d, entries, std::nullopt);
    if (presentation_determinant(m).is_zero())
        throw Error(Errc::ValidationError, "torsion: det F vanishes to working precision");
    return m;
}

GammaModule GammaModule::with_precision(int precision) const {
    if (integer_) return from_integers(context().with_precision(precision), d_, *integer_);
    std::vector<PowerSeries> e;
    for (const auto& s : entries_) e.push_back(s.with_precision(precision));
    return GammaModule(d_, std::move(e), std::nullopt);
}

PowerSeries presentation_determinant(const GammaModule& m) {
    const PadicContext& ctx = m.context();
    std::size_t order = std::numeric_limits<std::size_t>::max();
    std::vector<Coeffs> raw;
    for (const auto& e : m.entries()) {
        if (!e.is_exact()) order = std::min(order, e.order());
        raw.push_back(e.residues());
    }
    const bool exact = order == std::numeric_limits<std::size_t>::max();
    PolyRing ring{ResidueRing{ctx.modulus()}, exact ? 0 : order};
    Coeffs det = detail::berkowitz_determinant(std::move(raw), m.rank(), ring);
    if (exact) return PowerSeries::polynomial(ctx, det);
    det.resize(order);
    return PowerSeries::truncated(ctx, det);
}

PowerSeries characteristic_element(const GammaModule& m) {
    if (m.integer_entries() && is_zero_poly(integer_determinant(*m.integer_entries(), m.rank())))
        throw Error(Errc::ZeroDeterminant, "det F vanishes identically");
    WeierstrassData w = weierstrass_prepare(presentation_determinant(m));
    return w.distinguished.scaled(PadicInt(m.context(), m.context().prime()).pow(w.mu));
}

EulerResult euler_characteristic_direct(const GammaModule& m, const Character& rho, int n) {
    const PadicContext& ctx = m.context();
    const std::size_t d = m.rank();
    const std::size_t size = level_size(ctx.prime(), n);
    PadicMatrix big(ctx, d * size, d * size);
    try {
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                PadicMatrix blk = mult_matrix_mod_omega(twist_series(m.entry(i, j), rho, Direction::Inverse), n);
                for (std::size_t k = 0; k < size; ++k)
                    for (std::size_t c = 0; c < size; ++c)
                        big.set_residue(i * size + k, j * size + c, blk.residue(k, c));
            }
    } catch (const Error& e) {
        // A truncated presentation that does not pin down the twisted quotient.
        if (e.code() != Errc::PrecisionExhausted) throw;
        return undecided(m, nullptr, d, rho, n);
    }
    HomologyOrders h = cokernel_kernel_orders(smith_form(big));
    if (h.h0.determinate) return exists(h.h0.exponent, ctx.precision());
    return undecided(m, m.integer_entries() ? &*m.integer_entries() : nullptr, d, rho, n);
}

EulerResult euler_characteristic_analytic(const GammaModule& m, const Character& rho, int n) {
    const PadicContext& ctx = m.context();
    std::optional<std::vector<IntPoly>> det;
    if (m.integer_entries()) det = std::vector<IntPoly>{integer_determinant(*m.integer_entries(), m.rank())};
    PowerSeries c = PowerSeries::zero(ctx);
    Valuation v = Valuation::at_least(ctx.precision());
    try {
        c = characteristic_element(m);
        v = det_mult_mod_omega(twist_series(c, rho, Direction::Inverse), n).valuation();
    } catch (const Error& e) {
        if (e.code() != Errc::ZeroToPrecision && e.code() != Errc::PrecisionExhausted) throw;
        return undecided(m, det ? &*det : nullptr, 1, rho, n);
    }
    if (v.is_finite()) return exists(v.value(), ctx.precision());
    return undecided(m, det ? &*det : nullptr, 1, rho, n);
}

bool TwistSearchReport::undecided_before_acceptance() const {
    const std::size_t end = accepted ? *accepted : candidates.size();
    for (std::size_t i = 0; i < end; ++i)
        for (const auto& l : candidates[i].levels)
            if (l.result.status == EulerStatus::IndeterminateAtPrecision) return true;
    return false;
}

std::vector<mpz_class> twist_candidates(const mpz_class& p, const TwistSearchOptions& options) {
    if (options.budget < 1) throw Error(Errc::InvalidArgument, "budget must be positive");
    const auto budget = static_cast<std::size_t>(options.budget);
    std::vector<mpz_class> ks;
    if (options.include_trivial) ks.emplace_back(0);
    if (options.seed) {
        std::mt19937_64 rng(*options.seed);
        std::set<unsigned long> seen;
        const unsigned long range = 16 * budget;
        while (ks.size() < budget) {
            unsigned long k = 1 + rng() % range;
            if (seen.insert(k).second) ks.emplace_back(k);
        }
    } else {
        for (unsigned long k = 1; ks.size() < budget; ++k) ks.emplace_back(k);
    }
    std::vector<mpz_class> us;
    for (const auto& k : ks) us.push_back(1 + k * p);
    return us;
}

TwistSearchReport search_twist(const GammaModule& m, int n_max, const TwistSearchOptions& options) {
    if (n_max < 0) throw Error(Errc::InvalidArgument, "n_max must be nonnegative");
    TwistSearchReport report;
    for (const auto& u : twist_candidates(m.context().prime(), options)) {
        Character rho = Character::from_integer(m.context(), u);
        CandidateRecord rec;
        rec.u = u;
        bool ok = true;
        for (int n = 0; n <= n_max && ok; ++n) {
            LevelCertificate cert;
            cert.n = n;
            cert.result = euler_characteristic_direct(m, rho, n);
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

Character find_twist(const GammaModule& m, int n_max, const TwistSearchOptions& options, TwistSearchReport* report) {
    TwistSearchReport r = search_twist(m, n_max, options);
    if (report) *report = r;
    if (!r.winner())
        throw Error(Errc::BudgetExhausted, "no candidate among " + std::to_string(r.candidates.size()) +
                                               " certifies every level up to n = " + std::to_string(n_max));
    return Character::from_integer(m.context(), r.winner()->u);
}

}  // namespace iwalab
