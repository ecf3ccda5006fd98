#include "iwalab/matrix.hpp"

#include <algorithm>
#include <utility>

namespace iwalab {

PadicMatrix::PadicMatrix(const PadicContext& ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols) {}

PadicMatrix PadicMatrix::from_entries(const std::vector<std::vector<PadicInt>>& rows) {
    if (rows.empty() || rows.front().empty()) throw Error(Errc::InvalidArgument, "empty matrix");
    const PadicContext& ctx = rows.front().front().context();
    PadicMatrix m(ctx, rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) throw Error(Errc::InvalidArgument, "ragged matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

PadicMatrix PadicMatrix::from_integers(const PadicContext& ctx, std::size_t rows, std::size_t cols,
                                       const std::vector<mpz_class>& row_major) {
    if (row_major.size() != rows * cols) throw Error(Errc::InvalidArgument, "entry count does not match shape");
    PadicMatrix m(ctx, rows, cols);
    for (std::size_t k = 0; k < row_major.size(); ++k) m.data_[k] = ctx.reduce(row_major[k]);
    return m;
}

PadicMatrix PadicMatrix::identity(const PadicContext& ctx, std::size_t n) {
    PadicMatrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = ctx.reduce(1);
    return m;
}

void PadicMatrix::set(std::size_t i, std::size_t j, const PadicInt& value) {
    if (!(value.context() == ctx_)) throw Error(Errc::MixedContext, "matrix entry from a different context");
    data_[i * cols_ + j] = value.residue();
}

void PadicMatrix::set_residue(std::size_t i, std::size_t j, const mpz_class& value) {
    data_[i * cols_ + j] = ctx_.reduce(value);
}

PadicMatrix PadicMatrix::with_precision(int precision) const {
    PadicMatrix m(ctx_.with_precision(precision), rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = m.ctx_.reduce(data_[k]);
    return m;
}

bool PadicMatrix::operator==(const PadicMatrix& other) const {
    return ctx_ == other.ctx_ && rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool ElementaryDivisors::all_finite() const {
    return std::all_of(exponents.begin(), exponents.end(), [](const Valuation& v) { return v.is_finite(); });
}

long ElementaryDivisors::exponent_sum() const {
    long s = 0;
    for (const auto& v : exponents)
        if (v.is_finite()) s += v.value();
    return s;
}

namespace {

struct Elimination {
    std::vector<Valuation> pivots;
    mpz_class det;  // meaningful for square input only
};

// Gaussian elimination over the local ring Z/p^N with minimal-valuation
// pivoting. Each pivot divides every remaining entry, so clearing its column
// by row operations leaves a block whose elementary divisors are the rest.
Elimination eliminate(const PadicMatrix& mat) {
    const PadicContext& ctx = mat.context();
    const mpz_class& mod = ctx.modulus();
    const unsigned long small_p = ctx.small_prime();
    const std::size_t rows = mat.rows(), cols = mat.cols();
    std::vector<mpz_class> a = mat.residues();
    auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * cols + j]; };

    Elimination out;
    out.det = 1;
    bool negate = false;
    const std::size_t steps = std::min(rows, cols);
    mpz_class pk, unit, unit_inv, factor, tmp;

    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pi = rows, pj = cols;
        long best = ctx.precision();
        // A unit pivot is the common case and needs no valuation computation.
        for (std::size_t i = k; i < rows && pi == rows; ++i)
            for (std::size_t j = k; j < cols; ++j) {
                const mpz_class& x = at(i, j);
                if (x == 0) continue;
                bool is_unit = small_p != 0 ? mpz_fdiv_ui(x.get_mpz_t(), small_p) != 0
                                            : !mpz_divisible_p(x.get_mpz_t(), ctx.prime().get_mpz_t());
                if (is_unit) {
                    pi = i;
                    pj = j;
                    best = 0;
                    break;
                }
            }
        if (pi == rows) {
            for (std::size_t i = k; i < rows; ++i)
                for (std::size_t j = k; j < cols; ++j) {
                    if (at(i, j) == 0) continue;
                    Valuation v = valuation_of(ctx, at(i, j));
                    if (v.is_finite() && v.value() < best) {
                        best = v.value();
                        pi = i;
                        pj = j;
                    }
                }
        }
        if (pi == rows) {
            for (std::size_t r = k; r < steps; ++r) out.pivots.push_back(Valuation::at_least(ctx.precision()));
            out.det = 0;
            break;
        }
        if (pi != k) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(k, j), at(pi, j));
            negate = !negate;
        }
        if (pj != k) {
            for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, k), at(i, pj));
            negate = !negate;
        }
        out.pivots.push_back(Valuation::finite(best));
        out.det *= at(k, k);
        ctx.reduce_in_place(out.det);

        mpz_pow_ui(pk.get_mpz_t(), ctx.prime().get_mpz_t(), static_cast<unsigned long>(best));
        mpz_divexact(unit.get_mpz_t(), at(k, k).get_mpz_t(), pk.get_mpz_t());
        mpz_invert(unit_inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t());

        for (std::size_t i = k + 1; i < rows; ++i) {
            mpz_class& lead = at(i, k);
            if (lead == 0) continue;
            mpz_divexact(factor.get_mpz_t(), lead.get_mpz_t(), pk.get_mpz_t());
            mpz_mul(factor.get_mpz_t(), factor.get_mpz_t(), unit_inv.get_mpz_t());
            mpz_fdiv_r(factor.get_mpz_t(), factor.get_mpz_t(), mod.get_mpz_t());
            for (std::size_t j = k + 1; j < cols; ++j) {
                const mpz_class& src = at(k, j);
                if (src == 0) continue;
                mpz_class& dst = at(i, j);
                mpz_submul(dst.get_mpz_t(), factor.get_mpz_t(), src.get_mpz_t());
                mpz_fdiv_r(dst.get_mpz_t(), dst.get_mpz_t(), mod.get_mpz_t());
            }
            lead = 0;
        }
    }
    if (negate && out.det != 0) out.det = mod - out.det;
    return out;
}

}  // namespace

ElementaryDivisors smith_form(const PadicMatrix& mat) {
    ElementaryDivisors d;
    d.row_count = mat.rows();
    d.col_count = mat.cols();
    d.exponents = eliminate(mat).pivots;
    std::sort(d.exponents.begin(), d.exponents.end());
    return d;
}

PadicInt determinant(const PadicMatrix& mat) {
    if (!mat.is_square()) throw Error(Errc::NotSquare, "determinant of a non-square matrix");
    if (mat.rows() == 0) return PadicInt::one(mat.context());
    return PadicInt(mat.context(), eliminate(mat).det);
}

HomologyOrders cokernel_kernel_orders(const ElementaryDivisors& divisors) {
    if (divisors.row_count != divisors.col_count)
        throw Error(Errc::NotSquare, "homology orders need a square presentation");
    if (!divisors.all_finite()) return {OrderReport::indeterminate(), OrderReport::indeterminate()};
    // Equal-rank free modules: a map with finite cokernel is injective.
    return {OrderReport::finite(divisors.exponent_sum()), OrderReport::trivial()};
}

}  // namespace iwalab
