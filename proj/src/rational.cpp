#include "liouville/rational.hpp"

#include <cctype>

namespace liouville {

Rational rational_from_decimal(const std::string& text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    bool negative = false;

    if (i < n && (text[i] == '+' || text[i] == '-')) {
        negative = (text[i] == '-');
        ++i;
    }

    std::string digits;  // integer and fractional digits concatenated
    long frac_digits = 0;
    bool seen_digit = false;

    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits += text[i++];
        seen_digit = true;
    }
    if (i < n && text[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits += text[i++];
            ++frac_digits;
            seen_digit = true;
        }
    }
    if (!seen_digit) throw UsageError("not a decimal number: '" + text + "'");

    long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_neg = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            exp_neg = (text[i] == '-');
            ++i;
        }
        if (i == n || !std::isdigit(static_cast<unsigned char>(text[i])))
            throw UsageError("malformed exponent in '" + text + "'");
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            exponent = exponent * 10 + (text[i++] - '0');
            if (exponent > 100000) throw UsageError("exponent out of range in '" + text + "'");
        }
        if (exp_neg) exponent = -exponent;
    }
    if (i != n) throw UsageError("trailing characters in number '" + text + "'");

    BigInt mantissa(digits.empty() ? "0" : digits, 10);
    long ten_power = exponent - frac_digits;

    Rational value(mantissa);
    if (ten_power > 0) {
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(ten_power));
        value *= Rational(scale);
    } else if (ten_power < 0) {
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-ten_power));
        value /= Rational(scale);
    }
    if (negative) value = -value;
    value.canonicalize();
    return value;
}

Rational inverse_square_sum(unsigned long lo, unsigned long hi) {
    if (lo == 0) throw UsageError("inverse_square_sum needs lo >= 1");
    Rational sum = 0;
    for (unsigned long k = lo; k <= hi; ++k) {
        BigInt kk(k);
        Rational term(1, 1);
        term /= Rational(kk * kk);
        sum += term;
    }
    return sum;
}

RationalBracket zeta2_tail_bracket(unsigned long n, unsigned long terms) {
    if (terms <= n) terms = n + 1;
    // sum_{k=n+1}^{terms} 1/k^2 exactly, then bracket the rest by the
    // integral comparison 1/(terms+1) < sum_{k>terms} 1/k^2 < 1/terms.
    Rational partial = inverse_square_sum(n + 1, terms);
    RationalBracket out;
    out.lo = partial + make_rational(1, static_cast<long>(terms) + 1);
    out.hi = partial + make_rational(1, static_cast<long>(terms));
    return out;
}

RationalBracket sigma_sup_norm_bracket(unsigned long terms) {
    RationalBracket tail = zeta2_tail_bracket(0, terms);
    return {tail.lo + 1, tail.hi + 1};
}

Rational inverse_square_tail_lower_bound(unsigned long n, unsigned long limit,
                                         unsigned long terms) {
    if (limit <= n) return Rational(0);
    if (limit <= terms) return inverse_square_sum(n + 1, limit);
    Rational partial = inverse_square_sum(n + 1, terms);
    // Remaining terms k = terms+1 .. limit: each 1/k^2 > 1/(k(k+1)), and the
    // telescoping sum of the latter is 1/(terms+1) - 1/(limit+1).
    partial += make_rational(1, static_cast<long>(terms) + 1);
    partial -= Rational(1) / Rational(BigInt(limit) + 1);
    return partial;
}

}  // namespace liouville
