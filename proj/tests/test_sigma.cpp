#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "liouville/rational.hpp"
#include "liouville/sigma.hpp"

using namespace liouville;

namespace {

// Independent oracle for the step value on the cell (m, m+1]: reduce the
// cell toward the seed pair one ring at a time, accumulating the increments
// by hand. Written against the recursion as stated, sharing no code with
// the library implementation.
Rational oracle_cell(BigInt m) {
    Rational acc = 0;
    while (!(m == -1 || m == 0)) {
        // right end of the cell locates the ring: x = m + 1
        BigInt x = m + 1;
        if (x > 1) {
            unsigned n = 0;
            while (pow3(n + 1) < x) ++n;  // 3^n < x <= 3^{n+1}
            acc += make_rational(1, static_cast<long>((n + 1)) *
                                        static_cast<long>(n + 1));
            m -= 2 * pow3(n);
        } else {  // x <= -1
            unsigned n = 0;
            while (pow3(n + 1) < -x + 1) ++n;  // -3^{n+1} < x <= -3^n
            acc -= make_rational(1, static_cast<long>((n + 1)) *
                                        static_cast<long>(n + 1));
            m += 2 * pow3(n);
        }
    }
    return acc + (m == 0 ? 1 : -1);
}

// Triangle-wave oracle from the period-1 definition 2|x| on [-1/2, 1/2].
Rational oracle_z(const Rational& x) {
    Rational t = x - Rational(floor_int(x));  // t in [0, 1)
    if (t <= make_rational(1, 2)) return 2 * t;
    return 2 * (1 - t);
}

}  // namespace

TEST_CASE("ring increments") {
    CHECK(ring_increment(1) == make_rational(1, 4));
    CHECK(ring_increment(2) == make_rational(1, 9));
    CHECK(ring_increment(3) == make_rational(1, 16));
}

TEST_CASE("seed and hand-unrolled step values") {
    CHECK(sigma_at(make_rational(1, 2)) == 1);
    CHECK(sigma_at(make_rational(-1, 2)) == -1);
    CHECK(sigma_at(Rational(1)) == 1);
    CHECK(sigma_at(Rational(0)) == -1);  // 0 lies in (-1, 0]
    // sigma(3) = sigma(1) + 1 = 2; sigma(4) = sigma(-2) + 1/4 = -7/4
    CHECK(sigma_at(Rational(3)) == 2);
    CHECK(sigma_at(Rational(4)) == make_rational(-7, 4));
    CHECK(sigma_cell(BigInt(2)) == 2);
    CHECK(sigma_cell(BigInt(3)) == make_rational(-7, 4));
}

TEST_CASE("cell index respects the half-open convention") {
    CHECK(cell_index(Rational(3)) == 2);
    CHECK(cell_index(make_rational(5, 2)) == 2);
    CHECK(cell_index(Rational(-1)) == -2);
    CHECK(cell_index(Rational(0)) == -1);
    CHECK(cell_index(make_rational(1, 4)) == 0);
}

TEST_CASE("library step values match the independent descent oracle") {
    for (long m = -250; m <= 250; ++m)
        CHECK(sigma_cell(BigInt(m)) == oracle_cell(BigInt(m)));
    // a couple of distant cells
    CHECK(sigma_cell(BigInt(6560)) == oracle_cell(BigInt(6560)));
    CHECK(sigma_cell(BigInt(-6561)) == oracle_cell(BigInt(-6561)));
}

TEST_CASE("cached table agrees with direct recursion") {
    SigmaTable table(4);  // covers (-81, 81]
    CHECK(table.half_width() == 81);
    for (std::int64_t m = -81; m < 81; ++m)
        CHECK(table.cell(m) == sigma_cell(BigInt(m)));
    CHECK(table.at(make_rational(9, 2)) == sigma_at(make_rational(9, 2)));
    CHECK(!table.contains_cell(81));
    CHECK(table.contains_cell(-81));
}

TEST_CASE("step function is odd away from the integers") {
    const Rational half = make_rational(1, 2);
    for (long m = 0; m <= 120; ++m) {
        const Rational x = Rational(m) + half;
        CHECK(sigma_at(-x) == -sigma_at(x));
    }
    CHECK(sigma_at(make_rational(-17, 3)) == -sigma_at(make_rational(17, 3)));
}

TEST_CASE("constant on each cell") {
    for (long m : {-40L, -7L, -1L, 0L, 3L, 11L, 80L}) {
        const Rational v1 = sigma_at(Rational(m) + make_rational(1, 7));
        const Rational v2 = sigma_at(Rational(m) + make_rational(6, 7));
        const Rational v3 = sigma_at(Rational(m + 1));
        CHECK(v1 == v2);
        CHECK(v2 == v3);
    }
}

TEST_CASE("triangle wave values and oracle sweep") {
    CHECK(z_at(make_rational(1, 4)) == make_rational(1, 2));
    CHECK(z_at(Rational(0)) == 0);
    CHECK(z_at(make_rational(3, 4)) == make_rational(1, 2));
    CHECK(z_at(make_rational(1, 2)) == 1);
    CHECK(z_at(Rational(7)) == 0);
    for (long num = -60; num <= 60; ++num) {
        const Rational x = make_rational(num, 7);
        CHECK(z_at(x) == oracle_z(x));
        CHECK(z_at(x) >= 0);
        CHECK(z_at(x) <= 1);
        CHECK(z_at(x + 1) == z_at(x));
    }
}

TEST_CASE("product b is the exact product and is odd") {
    CHECK(b_at(make_rational(1, 4)) == make_rational(1, 2));
    CHECK(b_at(Rational(0)) == 0);
    CHECK(b_at(make_rational(-1, 4)) == make_rational(-1, 2));
    for (long num = -45; num <= 45; ++num) {
        const Rational x = make_rational(num, 4);
        CHECK(b_at(x) == sigma_at(x) * z_at(x));
        CHECK(b_at(-x) == -b_at(x));
    }
}

TEST_CASE("periodic approximants") {
    CHECK(phi_n_at(1, Rational(2)) == 0);
    CHECK(phi_n_at(1, Rational(4)) == -2);  // phi_1(4) = sigma(-2)
    CHECK(psi_n_at(1, make_rational(1, 4)) == make_rational(1, 2));
    CHECK(psi_n_at(2, Rational(0)) == 0);
    for (long num = -30; num <= 30; ++num) {
        const Rational x = make_rational(num, 5);
        CHECK(phi_n_at(1, x + 6) == phi_n_at(1, x));
        CHECK(phi_n_at(2, x + 18) == phi_n_at(2, x));
        CHECK(psi_n_at(1, x + 6) == psi_n_at(1, x));
        CHECK(psi_n_at(1, x) == phi_n_at(1, x) * z_at(x));
    }
    // agreement with the full function on the base window
    for (long num = -8; num <= 9; ++num) {
        const Rational x = make_rational(3 * num, 8) ;
        if (x > -3 && x <= 3) CHECK(phi_n_at(1, x) == sigma_at(x));
        if (x > -9 && x <= 9) CHECK(phi_n_at(2, x) == sigma_at(x));
    }
}

TEST_CASE("approximation error never exceeds the step-function error") {
    for (unsigned n = 1; n <= 3; ++n)
        for (long num = -100; num <= 100; ++num) {
            const Rational x = make_rational(num, 3);
            const Rational db = b_at(x) - psi_n_at(n, x);
            const Rational ds = sigma_at(x) - phi_n_at(n, x);
            CHECK(abs(db) <= abs(ds));
        }
}

TEST_CASE("prefix integral values") {
    PrefixTable pre(3);
    CHECK(pre.F_at(Rational(0)) == 0);
    CHECK(pre.F_at(Rational(3)) == 3);  // cells 1, 0, 2
    CHECK(pre.F_at(Rational(-1)) == 1);
    CHECK(pre.F_at(Rational(1)) == 1);
    // interior of a cell: linear interpolation, sigma = 2 on (2, 3]
    CHECK(pre.F_at(make_rational(5, 2)) == 1 + make_rational(1, 2) * 2);
    CHECK(pre.B_at(Rational(1)) == make_rational(1, 2));
    CHECK(pre.B_at(Rational(0)) == 0);
    // quarter-cell: integral of 2t from 0 to 1/4 is 1/16
    CHECK(pre.B_at(make_rational(1, 4)) == make_rational(1, 16));
    CHECK(pre.B_at(make_rational(3, 4)) == make_rational(7, 16));
}

TEST_CASE("prefix integral of the step function matches an independent sum") {
    PrefixTable pre(4);
    for (long m = 1; m <= 81; ++m) {
        Rational sum = 0;
        for (long k = 0; k < m; ++k) sum += oracle_cell(BigInt(k));
        CHECK(pre.F_integer(m) == sum);
    }
}

TEST_CASE("prefix integrals are even and halve at integers") {
    PrefixTable pre(4);
    for (long num = 1; num <= 60; ++num) {
        const Rational x = make_rational(num, 3);
        CHECK(pre.F_at(-x) == pre.F_at(x));
        CHECK(pre.B_at(-x) == pre.B_at(x));
    }
    for (long m = 0; m <= 81; ++m)
        CHECK(pre.B_at(Rational(m)) == pre.F_at(Rational(m)) / 2);
}

TEST_CASE("running integral of b matches exact trapezoid sums on half-cells") {
    // b is linear on every half-cell, so trapezoid sums built purely from
    // point values of b are an exact independent oracle.
    PrefixTable pre(3);
    const Rational half = make_rational(1, 2);
    for (long num = 1; num <= 54; ++num) {
        const Rational x = make_rational(num, 2);
        Rational sum = 0;
        Rational lo = 0;
        while (lo < x) {
            const Rational hi = lo + half <= x ? lo + half : x;
            sum += (hi - lo) * (b_at(lo) + b_at(hi)) / 2;
            lo = hi;
        }
        CHECK(pre.B_at(x) == sum);
    }
}

TEST_CASE("exact approximation suprema") {
    CHECK(sup_diff_sigma_phi(1, 1) == 0);
    CHECK(sup_diff_sigma_phi(1, 2) == make_rational(1, 4));
    CHECK(sup_diff_sigma_phi(1, 3) == make_rational(1, 4) + make_rational(1, 9));
    CHECK(sup_diff_sigma_phi(2, 4) == make_rational(1, 9) + make_rational(1, 16));
    CHECK(sup_diff_b_psi(1, 3) == sup_diff_sigma_phi(1, 3));
    CHECK(sup_diff_b_psi(2, 2) == 0);
}

TEST_CASE("window growth on demand") {
    PrefixTable pre(1);
    CHECK(pre.max_integer() == 3);
    pre.ensure_covers(Rational(30));
    CHECK(pre.max_integer() >= 30);
    CHECK(pre.F_at(Rational(27)) == [&] {
        Rational sum = 0;
        for (long k = 0; k < 27; ++k) sum += oracle_cell(BigInt(k));
        return sum;
    }());
}
