#include "iwalab/detail/ring.hpp"

#include <algorithm>
#include <stdexcept>

namespace iwalab::detail {

void trim(Coeffs& a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
    if (a.empty()) a.emplace_back(0);
}

Coeffs poly_add(const Coeffs& a, const Coeffs& b, const ResidueRing& ring) {
    Coeffs r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
        ring.reduce(r[i]);
    }
    return r;
}

Coeffs poly_sub(const Coeffs& a, const Coeffs& b, const ResidueRing& ring) {
    Coeffs r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
        ring.reduce(r[i]);
    }
    return r;
}

Coeffs poly_mul_trunc(const Coeffs& a, const Coeffs& b, std::size_t order, const ResidueRing& ring) {
    if (a.empty() || b.empty() || order == 0) return Coeffs(std::max<std::size_t>(order, 1));
    const std::size_t full = a.size() + b.size() - 1;
    const std::size_t len = std::min(full, order);
    Coeffs r(len);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        const std::size_t jmax = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    for (auto& c : r) ring.reduce(c);
    return r;
}

Coeffs poly_mul(const Coeffs& a, const Coeffs& b, const ResidueRing& ring) {
    return poly_mul_trunc(a, b, static_cast<std::size_t>(-1), ring);
}

std::pair<Coeffs, Coeffs> poly_divmod_monic(const Coeffs& a, const Coeffs& m, const ResidueRing& ring) {
    Coeffs mm = m;
    trim(mm);
    const std::size_t dm = mm.size() - 1;
    if (mm.back() != 1) throw std::logic_error("poly_divmod_monic: divisor is not monic");
    Coeffs r = a;
    if (r.size() <= dm) {
        r.resize(std::max<std::size_t>(dm, 1));
        for (auto& c : r) ring.reduce(c);
        return {Coeffs{0}, r};
    }
    Coeffs q(r.size() - dm);
    for (std::size_t i = r.size(); i-- > dm;) {
        ring.reduce(r[i]);
        if (r[i] == 0) continue;
        mpz_class c = r[i];
        q[i - dm] = c;
        for (std::size_t j = 0; j <= dm; ++j) mpz_submul(r[i - dm + j].get_mpz_t(), c.get_mpz_t(), mm[j].get_mpz_t());
    }
    r.resize(std::max<std::size_t>(dm, 1));
    for (auto& c : r) ring.reduce(c);
    for (auto& c : q) ring.reduce(c);
    return {q, r};
}

Coeffs poly_mod_monic(const Coeffs& a, const Coeffs& m, const ResidueRing& ring) {
    return poly_divmod_monic(a, m, ring).second;
}

Coeffs poly_substitute_linear(const Coeffs& a, const mpz_class& shift, const mpz_class& scale, std::size_t order,
                              const ResidueRing& ring) {
    const std::size_t cap = order == 0 ? a.size() : std::min(order, a.size());
    Coeffs res{0};
    // Horner: res = res*(shift + scale X) + a_k, kept below X^cap.
    for (std::size_t k = a.size(); k-- > 0;) {
        Coeffs next(std::min(res.size() + 1, std::max<std::size_t>(cap, 1)));
        for (std::size_t i = 0; i < res.size(); ++i) {
            if (res[i] == 0) continue;
            if (i < next.size()) mpz_addmul(next[i].get_mpz_t(), res[i].get_mpz_t(), shift.get_mpz_t());
            if (i + 1 < next.size()) mpz_addmul(next[i + 1].get_mpz_t(), res[i].get_mpz_t(), scale.get_mpz_t());
        }
        next[0] += a[k];
        for (auto& c : next) ring.reduce(c);
        res = std::move(next);
    }
    return res;
}

mpz_class poly_evaluate(const Coeffs& a, const mpz_class& x, const ResidueRing& ring) {
    mpz_class acc = 0;
    for (std::size_t k = a.size(); k-- > 0;) {
        acc *= x;
        acc += a[k];
        ring.reduce(acc);
    }
    return acc;
}

Coeffs series_inverse(const Coeffs& a, std::size_t order, const ResidueRing& ring) {
    if (ring.exact()) throw std::logic_error("series_inverse needs a modulus");
    mpz_class inv0;
    if (a.empty() || mpz_invert(inv0.get_mpz_t(), a[0].get_mpz_t(), ring.modulus.get_mpz_t()) == 0)
        throw std::logic_error("series_inverse: constant term is not a unit");
    Coeffs b(order);
    if (order == 0) return b;
    b[0] = inv0;
    for (std::size_t k = 1; k < order; ++k) {
        mpz_class s = 0;
        for (std::size_t j = 1; j <= k && j < a.size(); ++j) mpz_addmul(s.get_mpz_t(), a[j].get_mpz_t(), b[k - j].get_mpz_t());
        ring.reduce(s);
        b[k] = -s * inv0;
        ring.reduce(b[k]);
    }
    return b;
}

Coeffs omega_poly(const mpz_class& degree, const ResidueRing& ring) {
    if (!degree.fits_ulong_p()) throw std::length_error("omega degree does not fit in memory");
    const unsigned long n = degree.get_ui();
    Coeffs r(n + 1);
    mpz_class binom = 1;
    for (unsigned long k = 0; k <= n; ++k) {
        r[k] = binom;
        ring.reduce(r[k]);
        if (k < n) {
            binom *= (n - k);
            binom /= (k + 1);
        }
    }
    r[0] = 0;
    return r;
}

}  // namespace iwalab::detail
