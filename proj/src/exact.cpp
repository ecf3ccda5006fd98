#include "iwalab/exact.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "iwalab/detail/ring.hpp"

namespace iwalab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

u64 powmod(u64 a, u64 e, u64 q) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, q);
        a = mulmod(a, a, q);
        e >>= 1;
    }
    return r;
}

u64 det_mod_prime(const IntMatrix& m, u64 q) {
    const std::size_t n = m.rows;
    std::vector<u64> a(n * n);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = mpz_fdiv_ui(m.data[k].get_mpz_t(), q);
    u64 det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (a[i * n + k] != 0) {
                piv = i;
                break;
            }
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            det = q - det;
        }
        det = mulmod(det, a[k * n + k], q);
        const u64 inv = powmod(a[k * n + k], q - 2, q);
        for (std::size_t i = k + 1; i < n; ++i) {
            u64 f = a[i * n + k];
            if (f == 0) continue;
            f = mulmod(f, inv, q);
            for (std::size_t j = k + 1; j < n; ++j) {
                u64 s = mulmod(f, a[k * n + j], q);
                a[i * n + j] = a[i * n + j] >= s ? a[i * n + j] - s : a[i * n + j] + q - s;
            }
        }
    }
    return det % q;
}

}  // namespace

bool determinant_is_zero(const IntMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0) return false;

    // log2 of the Hadamard bound, rounded up generously.
    std::size_t bound_bits = 1;
    for (std::size_t i = 0; i < n; ++i) {
        mpz_class sq = 0;
        for (std::size_t j = 0; j < n; ++j) mpz_addmul(sq.get_mpz_t(), m.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t());
        if (sq == 0) return true;
        bound_bits += mpz_sizeinbase(sq.get_mpz_t(), 2) / 2 + 1;
    }

    mpz_class prime = mpz_class(1) << 62;
    std::size_t covered_bits = 0;
    while (covered_bits <= bound_bits + 1) {
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
        const u64 q = mpz_get_ui(prime.get_mpz_t());
        if (det_mod_prime(m, q) != 0) return false;
        covered_bits += 62;
    }
    return true;
}

mpz_class bareiss_determinant(IntMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0) return 1;
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m.at(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class v = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                mpz_divexact(m.at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

IntPoly characteristic_polynomial(const IntMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
    return detail::berkowitz(m.data, m.rows, detail::ResidueRing{0});
}

}  // namespace iwalab
