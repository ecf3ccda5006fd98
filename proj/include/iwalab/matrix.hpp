#pragma once

#include <cstddef>
#include <vector>

#include "iwalab/padic.hpp"

namespace iwalab {

/// Dense row-major matrix over Z/p^N. Vectors are rows: x maps to x*A.
class PadicMatrix {
public:
    PadicMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols);

    /// Builds from PadicInt rows; every entry must share one context.
    static PadicMatrix from_entries(const std::vector<std::vector<PadicInt>>& rows);
    static PadicMatrix from_integers(const PadicContext& ctx, std::size_t rows, std::size_t cols,
                                     const std::vector<mpz_class>& row_major);
    static PadicMatrix identity(const PadicContext& ctx, std::size_t n);

    const PadicContext& context() const noexcept { return ctx_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    PadicInt at(std::size_t i, std::size_t j) const { return PadicInt(ctx_, data_[i * cols_ + j]); }
    void set(std::size_t i, std::size_t j, const PadicInt& value);

    const mpz_class& residue(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    /// Stores value mod p^N.
    void set_residue(std::size_t i, std::size_t j, const mpz_class& value);
    const std::vector<mpz_class>& residues() const noexcept { return data_; }

    /// Re-embeds residues into precision N' (digits beyond min(N, N') are zero).
    PadicMatrix with_precision(int precision) const;

    bool operator==(const PadicMatrix& other) const;

private:
    PadicContext ctx_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<mpz_class> data_;
};

/// Elementary divisors p^{e_1} | p^{e_2} | ... of a matrix over Z/p^N.
struct ElementaryDivisors {
    std::vector<Valuation> exponents;  // ascending, AtLeastN last
    std::size_t row_count = 0;
    std::size_t col_count = 0;

    bool all_finite() const;
    long exponent_sum() const;  // sum of the finite exponents
};

ElementaryDivisors smith_form(const PadicMatrix& mat);

/// det(mat) mod p^N. Throws NotSquare.
PadicInt determinant(const PadicMatrix& mat);

struct OrderReport {
    bool determinate = true;
    long exponent = 0;  // the group has order p^exponent when determinate

    static OrderReport finite(long e) { return {true, e}; }
    static OrderReport trivial() { return {true, 0}; }
    static OrderReport indeterminate() { return {false, 0}; }
    bool operator==(const OrderReport&) const = default;
};

/// Orders of coker and ker of a square map between free Z_p-modules of equal
/// rank, read off its elementary divisors.
struct HomologyOrders {
    OrderReport h0;
    OrderReport h1;
};

HomologyOrders cokernel_kernel_orders(const ElementaryDivisors& divisors);

}  // namespace iwalab
