#pragma once

// Internal coefficient arithmetic shared by the series, matrix and module
// code. Inner loops run on bare mpz_class values against an explicit modulus
// instead of PadicInt so that no context bookkeeping happens per operation.

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace iwalab::detail {

using Coeffs = std::vector<mpz_class>;

/// Z/m, or Z itself when m == 0.
struct ResidueRing {
    mpz_class modulus;

    bool exact() const { return modulus == 0; }
    void reduce(mpz_class& x) const {
        if (modulus != 0) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    }

    using Elem = mpz_class;
    Elem zero() const { return 0; }
    Elem one() const { return modulus == 1 ? 0 : 1; }
    Elem add(const Elem& a, const Elem& b) const { Elem r = a + b; reduce(r); return r; }
    Elem sub(const Elem& a, const Elem& b) const { Elem r = a - b; reduce(r); return r; }
    Elem mul(const Elem& a, const Elem& b) const { Elem r = a * b; reduce(r); return r; }
    Elem neg(const Elem& a) const { Elem r = -a; reduce(r); return r; }
};

void trim(Coeffs& a);
Coeffs poly_add(const Coeffs& a, const Coeffs& b, const ResidueRing& ring);
Coeffs poly_sub(const Coeffs& a, const Coeffs& b, const ResidueRing& ring);
Coeffs poly_mul(const Coeffs& a, const Coeffs& b, const ResidueRing& ring);
/// Product truncated below X^order.
Coeffs poly_mul_trunc(const Coeffs& a, const Coeffs& b, std::size_t order, const ResidueRing& ring);
/// Division by a monic polynomial: a = q*m + r with deg r < deg m.
std::pair<Coeffs, Coeffs> poly_divmod_monic(const Coeffs& a, const Coeffs& m, const ResidueRing& ring);
Coeffs poly_mod_monic(const Coeffs& a, const Coeffs& m, const ResidueRing& ring);
/// sum a_k (shift + scale*X)^k truncated below X^order (order 0 means keep everything).
Coeffs poly_substitute_linear(const Coeffs& a, const mpz_class& shift, const mpz_class& scale, std::size_t order,
                              const ResidueRing& ring);
mpz_class poly_evaluate(const Coeffs& a, const mpz_class& x, const ResidueRing& ring);
/// Inverse of a power series with unit constant term, below X^order. Needs a nonzero modulus.
Coeffs series_inverse(const Coeffs& a, std::size_t order, const ResidueRing& ring);
/// Binomial expansion of (1+X)^k - 1.
Coeffs omega_poly(const mpz_class& degree, const ResidueRing& ring);

/// Polynomials over a ResidueRing, optionally truncated below X^order
/// (order 0 keeps everything). Lets Berkowitz run on matrices of series.
struct PolyRing {
    ResidueRing base;
    std::size_t order = 0;

    using Elem = Coeffs;
    Elem zero() const { return Coeffs{0}; }
    Elem one() const { return Coeffs{base.one()}; }
    Elem add(const Elem& a, const Elem& b) const { return poly_add(a, b, base); }
    Elem sub(const Elem& a, const Elem& b) const { return poly_sub(a, b, base); }
    Elem mul(const Elem& a, const Elem& b) const {
        return order == 0 ? poly_mul(a, b, base) : poly_mul_trunc(a, b, order, base);
    }
    Elem neg(const Elem& a) const { return poly_sub(Coeffs{0}, a, base); }
};

/// Division-free characteristic polynomial (Berkowitz). Returns the
/// coefficients of det(x*I - M), lowest degree first. Works over any
/// commutative ring exposing zero/one/add/sub/mul/neg.
template <class Ring>
std::vector<typename Ring::Elem> berkowitz(std::vector<typename Ring::Elem> m, std::size_t n, const Ring& ring) {
    using Elem = typename Ring::Elem;
    if (n == 0) return {ring.one()};

    struct Transform {
        std::size_t size;
        std::vector<Elem> items;  // first column of the Toeplitz block
    };
    std::vector<Transform> transforms;
    std::size_t cur = n;
    auto at = [&](std::size_t i, std::size_t j) -> Elem& { return m[i * n + j]; };

    while (cur >= 2) {
        const std::size_t k = cur - 1;
        std::vector<Elem> row(k), col(k);
        for (std::size_t j = 0; j < k; ++j) {
            row[j] = ring.neg(at(k, j));
            col[j] = at(j, k);
        }
        std::vector<Elem> items;
        items.reserve(cur + 1);
        items.push_back(ring.one());
        items.push_back(ring.neg(at(k, k)));
        std::vector<Elem> vec = col;
        for (std::size_t i = 0; i + 1 < cur; ++i) {
            Elem s = ring.zero();
            for (std::size_t j = 0; j < k; ++j) s = ring.add(s, ring.mul(row[j], vec[j]));
            items.push_back(std::move(s));
            if (i + 2 < cur) {
                std::vector<Elem> next(k, ring.zero());
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t b = 0; b < k; ++b) next[a] = ring.add(next[a], ring.mul(at(a, b), vec[b]));
                vec = std::move(next);
            }
        }
        transforms.push_back({cur, std::move(items)});
        cur = k;
    }

    // highest degree first
    std::vector<Elem> poly{ring.one(), ring.neg(at(0, 0))};
    for (auto it = transforms.rbegin(); it != transforms.rend(); ++it) {
        const std::size_t sz = it->size;
        std::vector<Elem> next(sz + 1, ring.zero());
        for (std::size_t j = 0; j < sz; ++j)
            for (std::size_t i = 0; i + j <= sz; ++i)
                next[i + j] = ring.add(next[i + j], ring.mul(it->items[i], poly[j]));
        poly = std::move(next);
    }
    return {poly.rbegin(), poly.rend()};
}

/// det(M) read off the Berkowitz polynomial: constant term times (-1)^n.
template <class Ring>
typename Ring::Elem berkowitz_determinant(std::vector<typename Ring::Elem> m, std::size_t n, const Ring& ring) {
    auto cp = berkowitz(std::move(m), n, ring);
    return n % 2 == 0 ? cp.front() : ring.neg(cp.front());
}

}  // namespace iwalab::detail
