#pragma once

// Arbitrary-precision rational arithmetic used by the exact-construction
// layer. Values are GMP rationals kept in canonical form (lowest terms,
// positive denominator); every operation here is exact.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

namespace liouville {

using Rational = mpq_class;
using BigInt = mpz_class;

// Raised on bad arguments / bad configuration (CLI exit code 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an iterative numerical procedure fails to converge
// (CLI exit code 3).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den) {
    if (den == 0) throw UsageError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline BigInt floor_int(const Rational& x) {
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return f;
}

inline BigInt ceil_int(const Rational& x) {
    BigInt c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return c;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

// Correctly rounded conversion (nearest, ties to even). mpq_get_d truncates
// toward zero, so the true value lies between that double and its neighbor
// away from zero; an exact midpoint comparison picks the closer one.
inline double to_double(const Rational& x) {
    const double d0 = x.get_d();
    if (d0 == 0.0 || !std::isfinite(d0)) return d0;
    const double away = d0 > 0.0 ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
    const double d1 = std::nextafter(d0, away);
    if (!std::isfinite(d1)) return d0;
    const Rational mid = (Rational(d0) + Rational(d1)) / 2;
    const int side = cmp(x, mid);  // sign of x - mid, exactly
    if (d0 > 0.0 ? side > 0 : side < 0) return d1;
    if (side != 0) return d0;
    std::uint64_t bits0 = 0;
    std::memcpy(&bits0, &d0, sizeof bits0);
    return (bits0 & 1u) == 0 ? d0 : d1;
}

// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline BigInt pow3(unsigned n) {
    BigInt p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, n);
    return p;
}

inline std::int64_t pow3_i64(unsigned n) {
    std::int64_t p = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (p > (INT64_MAX / 3)) throw UsageError("3^n exceeds 64-bit range");
        p *= 3;
    }
    return p;
}

// Parses a decimal string ("-1.25", "0.3e-2", "7") to the exact rational it
// denotes. Used for bit-exact configuration values.
Rational rational_from_decimal(const std::string& text);

// Closed interval [lo, hi] bracketing an exactly-defined real number.
struct RationalBracket {
    Rational lo;
    Rational hi;

    double lo_d() const { return to_double(lo); }
    double hi_d() const { return to_double(hi); }
    Rational width() const { return hi - lo; }
};

// Exact partial sum of inverse squares, sum_{k=lo}^{hi} 1/k^2.
Rational inverse_square_sum(unsigned long lo, unsigned long hi);

// Rigorous bracket for the tail sum_{k=n+1}^infinity 1/k^2, obtained from the
// exact partial sum up to `terms` plus the integral bounds
// 1/(terms+1) < remainder < 1/terms.
RationalBracket zeta2_tail_bracket(unsigned long n, unsigned long terms = 10000);

// Bracket for the sup norm of sigma, 1 + sum_{k=1}^infinity 1/k^2.
RationalBracket sigma_sup_norm_bracket(unsigned long terms = 10000);

// Exact lower bound for the finite sum sum_{k=n+1}^{limit} 1/k^2. For
// limit <= terms the sum itself is returned; past that point the integral
// bound 1/(terms+1) - 1/(limit+1) under-counts the remaining terms.
Rational inverse_square_tail_lower_bound(unsigned long n, unsigned long limit,
                                         unsigned long terms = 10000);

}  // namespace liouville
