#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "../oracles.hpp"
#include "iwalab/exact.hpp"
#include "iwalab/matrix.hpp"

using namespace iwalab;

namespace {

PadicMatrix from_rows(const PadicContext& c, const oracle::Mat& m) {
    std::vector<mpz_class> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    return PadicMatrix::from_integers(c, m.size(), m[0].size(), flat);
}

oracle::Mat random_mat(std::mt19937_64& rng, std::size_t n, long c) {
    std::uniform_int_distribution<long> coef(-c, c);
    oracle::Mat m(n, std::vector<mpz_class>(n));
    for (auto& row : m)
        for (auto& x : row) x = coef(rng);
    return m;
}

}  // namespace

TEST_CASE("smith form of small matrices") {
    PadicContext c(3, 8);
    auto d = smith_form(from_rows(c, {{3, 0}, {0, 1}}));
    REQUIRE(d.exponents.size() == 2);
    CHECK(d.exponents[0] == Valuation::finite(0));
    CHECK(d.exponents[1] == Valuation::finite(1));

    d = smith_form(from_rows(c, {{0, 0}, {0, 0}}));
    CHECK(d.exponents[0].is_at_least_n());
    CHECK(d.exponents[1].is_at_least_n());

    d = smith_form(from_rows(c, {{3, 6}, {9, 12}}));
    CHECK(d.exponents[0] == Valuation::finite(1));
    CHECK(d.exponents[1] == Valuation::finite(1));
    // integer Smith form agrees: divisors 3 and 6
    auto snf = oracle::integer_snf({{3, 6}, {9, 12}});
    CHECK(oracle::vp(snf[0], 3) == 1);
    CHECK(oracle::vp(snf[1], 3) == 1);
}

TEST_CASE("cokernel and kernel orders from divisors") {
    ElementaryDivisors d;
    d.exponents = {Valuation::finite(0), Valuation::finite(1)};
    d.row_count = d.col_count = 2;
    auto h = cokernel_kernel_orders(d);
    CHECK(h.h0 == OrderReport::finite(1));
    CHECK(h.h1 == OrderReport::trivial());

    d.exponents = {Valuation::at_least(8)};
    d.row_count = d.col_count = 1;
    h = cokernel_kernel_orders(d);
    CHECK_FALSE(h.h0.determinate);
    CHECK_FALSE(h.h1.determinate);

    d.exponents = {Valuation::finite(2), Valuation::finite(2), Valuation::finite(2)};
    d.row_count = d.col_count = 3;
    h = cokernel_kernel_orders(d);
    CHECK(h.h0 == OrderReport::finite(6));
    CHECK(h.h1 == OrderReport::trivial());
    CHECK(oracle::cokernel_order_by_enumeration({{9, 0, 0}, {0, 9, 0}, {0, 0, 9}}, 729) == 729);
}

TEST_CASE("smith exponent sum equals the determinant valuation") {
    std::mt19937_64 rng(7);
    for (long p : {3L, 5L}) {
        PadicContext c(p, 40);
        for (int t = 0; t < 150; ++t) {
            const std::size_t n = 1 + rng() % 5;
            auto m = random_mat(rng, n, 12);
            const mpz_class det = oracle::cofactor_det(m);
            CHECK(det == oracle::rational_det(m));
            auto d = smith_form(from_rows(c, m));
            if (det == 0) {
                CHECK_FALSE(d.all_finite());
                continue;
            }
            REQUIRE(d.all_finite());
            CHECK(d.exponent_sum() == oracle::vp(det, p));
            CHECK(determinant(from_rows(c, m)).residue() == c.reduce(det));
            auto snf = oracle::integer_snf(m);
            for (std::size_t i = 0; i < n; ++i) CHECK(d.exponents[i].value() == oracle::vp(snf[i], p));
        }
    }
}

TEST_CASE("smith form is invariant under row and column permutations") {
    std::mt19937_64 rng(11);
    PadicContext c(3, 30);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + rng() % 4;
        auto m = random_mat(rng, n, 30);
        for (auto& row : m)
            for (auto& x : row) x *= (rng() % 3 == 0) ? 3 : 1;
        auto base = smith_form(from_rows(c, m)).exponents;
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        oracle::Mat rows(n), cols(n, std::vector<mpz_class>(n));
        for (std::size_t i = 0; i < n; ++i) rows[i] = m[perm[i]];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cols[i][j] = m[i][perm[j]];
        CHECK(smith_form(from_rows(c, rows)).exponents == base);
        CHECK(smith_form(from_rows(c, cols)).exponents == base);
    }
}

TEST_CASE("rectangular smith form") {
    PadicContext c(5, 6);
    auto d = smith_form(from_rows(c, {{5, 25, 0}, {10, 0, 125}}));
    REQUIRE(d.exponents.size() == 2);
    CHECK(d.exponents[0] == Valuation::finite(1));
    CHECK(d.exponents[1] == Valuation::finite(2));
}

TEST_CASE("determinant refuses non-square input") {
    PadicContext c(3, 4);
    CHECK_THROWS_AS(determinant(PadicMatrix(c, 2, 3)), Error);
}

TEST_CASE("exact integer determinant and characteristic polynomial") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 80; ++t) {
        const std::size_t n = 1 + rng() % 5;
        auto m = random_mat(rng, n, 9);
        if (t % 5 == 0 && n > 1) m[n - 1] = m[0];  // singular
        IntMatrix im(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) im.at(i, j) = m[i][j];
        const mpz_class det = oracle::cofactor_det(m);
        CHECK(bareiss_determinant(im) == det);
        CHECK(determinant_is_zero(im) == (det == 0));

        IntPoly cp = characteristic_polynomial(im);
        REQUIRE(cp.size() == n + 1);
        CHECK(cp[n] == 1);
        for (long x : {-3L, 0L, 2L, 7L}) {
            oracle::Mat shifted = m;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) shifted[i][j] = (i == j ? mpz_class(x) : mpz_class(0)) - m[i][j];
            CHECK(oracle::poly_eval(cp, x) == oracle::cofactor_det(shifted));
        }
    }
}
