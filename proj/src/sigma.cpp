#include "liouville/sigma.hpp"

#include <cstdlib>

namespace liouville {

namespace {

// Largest n with 3^n <= t, for t >= 1.
unsigned ring_of(const BigInt& t) {
    unsigned n = 0;
    BigInt p = 3;
    while (p <= t) {
        p *= 3;
        ++n;
    }
    return n;
}

// floor(a / p) for p > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t p) {
    std::int64_t q = a / p;
    if (a % p != 0 && a < 0) --q;
    return q;
}

}  // namespace

Rational ring_increment(unsigned n) {
    long d = static_cast<long>(n) + 1;
    return make_rational(1, d * d);
}

Rational sigma_cell(const BigInt& m) {
    BigInt cur = m;
    Rational accum = 0;
    // Walk the cell toward the seed window (-1, 1], collecting the increment
    // of each ring crossed. Positive cells shift left by 2*3^n, negative
    // cells shift right.
    while (cur != 0 && cur != -1) {
        if (cur >= 1) {
            unsigned n = ring_of(cur);
            accum += ring_increment(n);
            cur -= 2 * pow3(n);
        } else {
            unsigned n = ring_of(-cur - 1);
            accum -= ring_increment(n);
            cur += 2 * pow3(n);
        }
    }
    accum += (cur == 0) ? 1 : -1;
    return accum;
}

BigInt cell_index(const Rational& x) { return ceil_int(x) - 1; }

Rational sigma_at(const Rational& x) { return sigma_cell(cell_index(x)); }

Rational z_at(const Rational& x) {
    // Distance to the nearest integer, doubled. x - floor(x + 1/2) lies in
    // [-1/2, 1/2).
    Rational t = x - Rational(floor_int(x + make_rational(1, 2)));
    if (t < 0) t = -t;
    return 2 * t;
}

Rational b_at(const Rational& x) { return sigma_at(x) * z_at(x); }

Rational phi_n_at(unsigned n, const Rational& x) {
    BigInt half = pow3(n);
    Rational period(2 * half);
    // Reduce into (-3^n, 3^n]: subtract period * ceil((x - 3^n) / period).
    BigInt k = ceil_int((x - Rational(half)) / period);
    return sigma_at(x - period * Rational(k));
}

Rational psi_n_at(unsigned n, const Rational& x) {
    // z has period 1, which divides 2*3^n, so psi_n keeps phi_n's period.
    return phi_n_at(n, x) * z_at(x);
}

SigmaTable::SigmaTable(unsigned window_exponent)
    : window_exponent_(window_exponent),
      half_width_(pow3_i64(window_exponent)) {
    if (window_exponent > 12)
        throw UsageError("sigma table window 3^" + std::to_string(window_exponent) +
                         " is too large to tabulate");
    cells_.resize(static_cast<std::size_t>(2 * half_width_));
    auto slot = [&](std::int64_t m) -> Rational& {
        return cells_[static_cast<std::size_t>(m + half_width_)];
    };
    slot(-1) = -1;
    slot(0) = 1;
    // Fill ring n from the already-complete window [-3^n, 3^n).
    for (unsigned n = 0; n < window_exponent; ++n) {
        std::int64_t inner = pow3_i64(n);
        std::int64_t shift = 2 * inner;
        Rational inc = ring_increment(n);
        for (std::int64_t m = inner; m < 3 * inner; ++m) slot(m) = slot(m - shift) + inc;
        for (std::int64_t m = -3 * inner; m < -inner; ++m) slot(m) = slot(m + shift) - inc;
    }
}

const Rational& SigmaTable::cell(std::int64_t m) const {
    if (!contains_cell(m)) throw UsageError("sigma table cell index out of window");
    return cells_[static_cast<std::size_t>(m + half_width_)];
}

Rational SigmaTable::at(const Rational& x) const {
    BigInt m = cell_index(x);
    if (!m.fits_slong_p()) throw UsageError("sigma table lookup out of window");
    return cell(m.get_si());
}

PrefixTable::PrefixTable(unsigned window_exponent) : table_(window_exponent) {
    std::int64_t width = table_.half_width();
    prefix_.resize(static_cast<std::size_t>(width) + 1);
    prefix_[0] = 0;
    for (std::int64_t m = 0; m < width; ++m)
        prefix_[static_cast<std::size_t>(m) + 1] =
            prefix_[static_cast<std::size_t>(m)] + table_.cell(m);
}

void PrefixTable::grow(unsigned new_exponent) {
    if (new_exponent <= table_.window_exponent()) return;
    *this = PrefixTable(new_exponent);
}

void PrefixTable::ensure_covers(const Rational& x) {
    Rational xa = abs(x);
    unsigned n = table_.window_exponent();
    while (Rational(pow3(n)) < xa) {
        ++n;
        if (n > 12) throw UsageError("prefix table window 3^12 exceeded");
    }
    grow(n);
}

Rational PrefixTable::F_integer(std::int64_t m) {
    std::int64_t ma = std::llabs(m);
    ensure_covers(Rational(BigInt(static_cast<long>(ma))));
    return prefix_[static_cast<std::size_t>(ma)];
}

Rational PrefixTable::F_at(const Rational& x) {
    // sigma is odd away from the integers, so F is even.
    Rational xa = abs(x);
    ensure_covers(xa);
    BigInt mf = floor_int(xa);
    std::int64_t m = mf.get_si();
    if (m == table_.half_width()) return prefix_[static_cast<std::size_t>(m)];
    Rational s = xa - Rational(mf);
    return prefix_[static_cast<std::size_t>(m)] + s * table_.cell(m);
}

Rational PrefixTable::B_at(const Rational& x) {
    // b is odd, so B is even. Within a cell, with v the sigma value there,
    //   B(m + s) = F(m)/2 + v * q(s),
    //   q(s) = s^2 on [0, 1/2],  q(s) = -s^2 + 2s - 1/2 on [1/2, 1],
    // since q'(s) = z(m + s) on each half. q(1) = 1/2 restores F(m+1)/2.
    Rational xa = abs(x);
    ensure_covers(xa);
    BigInt mf = floor_int(xa);
    std::int64_t m = mf.get_si();
    Rational half(1, 2);
    if (m == table_.half_width()) return prefix_[static_cast<std::size_t>(m)] * half;
    Rational s = xa - Rational(mf);
    Rational q;
    if (s <= half)
        q = s * s;
    else
        q = -s * s + 2 * s - half;
    return prefix_[static_cast<std::size_t>(m)] * half + table_.cell(m) * q;
}

Rational sup_diff_sigma_phi(unsigned n, unsigned window_exponent) {
    if (window_exponent < n)
        throw UsageError("approximation window must contain the base period");
    SigmaTable table(window_exponent);
    std::int64_t base = pow3_i64(n);
    std::int64_t period = 2 * base;
    Rational sup = 0;
    for (std::int64_t m = -table.half_width(); m < table.half_width(); ++m) {
        // phi_n on (m, m+1] equals sigma on the cell translated into
        // [-3^n, 3^n).
        std::int64_t m_red = m - period * floor_div(m + base, period);
        Rational diff = abs(table.cell(m) - table.cell(m_red));
        if (diff > sup) sup = diff;
    }
    return sup;
}

Rational sup_diff_b_psi(unsigned n, unsigned window_exponent) {
    // |b - psi_n| = |sigma - phi_n| * z pointwise, and z runs through [0, 1]
    // on every cell while the first factor is constant there, so the sup
    // over any union of whole cells matches sup |sigma - phi_n| exactly.
    return sup_diff_sigma_phi(n, window_exponent);
}

}  // namespace liouville
