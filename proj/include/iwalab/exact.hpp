#pragma once

// Exact integer linear algebra. Used to separate "the determinant vanishes"
// from "the determinant is merely divisible by p^N" when inputs are integral.

#include <cstddef>
#include <vector>

#include <gmpxx.h>

namespace iwalab {

using IntPoly = std::vector<mpz_class>;  // little-endian coefficients

struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<mpz_class> data;  // row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    mpz_class& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const mpz_class& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Decides det(m) == 0 over Z. Determinants modulo word-size primes are
/// accumulated until their product exceeds twice the Hadamard bound.
bool determinant_is_zero(const IntMatrix& m);

/// Fraction-free (Bareiss) determinant over Z.
mpz_class bareiss_determinant(IntMatrix m);

/// det(x*I - m) over Z, lowest degree first.
IntPoly characteristic_polynomial(const IntMatrix& m);

}  // namespace iwalab
