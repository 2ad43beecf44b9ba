#pragma once

// Exact evaluation of the limit-periodic step function sigma, the unit
// triangle wave z, their product b = sigma * z, the periodic approximants
// phi_n / psi_n, and the prefix integrals F = int_0^x sigma and
// B = int_0^x b. Everything in this header is exact rational arithmetic;
// floating-point front ends live in counterexample.hpp.
//
// sigma is constant on each half-open cell (m, m+1], m an integer. On the
// seed window (-1, 1] it takes the values -1 and +1; the value on any other
// cell is obtained by translating 2*3^n toward the origin and adding or
// subtracting 1/(n+1)^2, where (3^n, 3^{n+1}] is the ring containing the
// cell. The accumulated increments are absolutely summable, which is what
// makes sigma a uniform limit of its periodic truncations phi_n.

#include <cstdint>
#include <vector>

#include "liouville/rational.hpp"

namespace liouville {

// Increment picked up when the recursion crosses from ring n to ring n-1,
// i.e. 1/(n+1)^2.
Rational ring_increment(unsigned n);

// Value of sigma on the cell (m, m+1]. Direct recursion on the cell index;
// cost is O(log^2 |m|) ring hops and exact rational adds.
Rational sigma_cell(const BigInt& m);

// Index m of the half-open cell (m, m+1] containing x, i.e. ceil(x) - 1.
BigInt cell_index(const Rational& x);

// Point evaluation sigma(x) for arbitrary rational x.
Rational sigma_at(const Rational& x);

// Triangle wave z(x) = 2 * dist(x, Z): period 1, z(0) = 0, z(1/2) = 1,
// piecewise linear with slope +-2 and kinks at the integers and
// half-integers. z vanishes exactly where sigma jumps, which is what makes
// b = sigma * z Lipschitz.
Rational z_at(const Rational& x);

// b(x) = sigma(x) * z(x): limit periodic, odd, Lipschitz.
Rational b_at(const Rational& x);

// Periodic approximant phi_n: equal to sigma on (-3^n, 3^n], extended with
// period 2 * 3^n. psi_n = phi_n * z.
Rational phi_n_at(unsigned n, const Rational& x);
Rational psi_n_at(unsigned n, const Rational& x);

// Cached table of sigma's cell values on (-3^N, 3^N], N = window_exponent.
// Built once by forward recursion; lookups are O(1).
class SigmaTable {
  public:
    explicit SigmaTable(unsigned window_exponent);

    unsigned window_exponent() const { return window_exponent_; }
    std::int64_t half_width() const { return half_width_; }  // 3^N

    bool contains_cell(std::int64_t m) const {
        return m >= -half_width_ && m < half_width_;
    }
    // Value on (m, m+1]; requires contains_cell(m).
    const Rational& cell(std::int64_t m) const;
    // Point evaluation inside the window (-3^N, 3^N].
    Rational at(const Rational& x) const;

  private:
    unsigned window_exponent_;
    std::int64_t half_width_;
    std::vector<Rational> cells_;  // cells_[m + half_width_] = sigma on (m, m+1]
};

// Exact prefix integrals of sigma and b on a window, with F(m) tabulated at
// the integers. Both integrals are even functions, so only |x| matters.
// Accessors grow the window on demand; this class is not safe for
// concurrent use while growing.
class PrefixTable {
  public:
    explicit PrefixTable(unsigned window_exponent);

    const SigmaTable& sigma() const { return table_; }
    std::int64_t max_integer() const { return table_.half_width(); }

    // F(x) = int_0^x sigma(y) dy: even, piecewise linear.
    Rational F_at(const Rational& x);
    // B(x) = int_0^x b(y) dy: even, piecewise quadratic with F(m)/2 at the
    // integers and one interior extremum per cell at the half-integer.
    Rational B_at(const Rational& x);

    // F at an integer point (exact prefix sum of cell values).
    Rational F_integer(std::int64_t m);

    void ensure_covers(const Rational& x);

  private:
    void grow(unsigned new_exponent);

    SigmaTable table_;
    std::vector<Rational> prefix_;  // prefix_[m] = F(m) for m = 0..3^N
};

// Exact sup over the window (-3^w, 3^w] of |sigma - phi_n|. Requires
// w >= n. Equals sum_{k=n+1}^{w} 1/k^2: each ring beyond the base window
// contributes exactly one fresh increment.
Rational sup_diff_sigma_phi(unsigned n, unsigned window_exponent);

// Exact sup over the window (-3^w, 3^w] of |b - psi_n|. The triangle wave
// attains 1 inside every cell, so this coincides with sup |sigma - phi_n|.
Rational sup_diff_b_psi(unsigned n, unsigned window_exponent);

}  // namespace liouville
