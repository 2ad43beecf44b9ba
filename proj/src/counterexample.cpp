#include "liouville/counterexample.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

namespace {

double log3(double y) { return std::log(y) / std::log(3.0); }

// Nudge a computed value upward/downward a few ulps so that rounded
// comparisons stay on the conservative side of the inequality under test.
double round_up(double v) {
    double out = v;
    for (int i = 0; i < 4; ++i) out = std::nextafter(out, std::numeric_limits<double>::infinity());
    return out;
}
double round_down(double v) {
    double out = v;
    for (int i = 0; i < 4; ++i) out = std::nextafter(out, -std::numeric_limits<double>::infinity());
    return out;
}

// (x-1)/(4 (log_3 x + 1)^2) evaluated in extended precision and rounded up.
double bound_numerator_up(double x) {
    long double lx = std::log(static_cast<long double>(x)) / std::log(3.0L);
    long double d = 4.0L * (lx + 1.0L) * (lx + 1.0L);
    long double v = (static_cast<long double>(x) - 1.0L) / d;
    return round_up(static_cast<double>(v));
}

// Record the claim lhs >= rhs where both sides are exact rationals: the
// verdict comes from the exact comparison, and the stored doubles are
// clamped so their sign never contradicts it.
void record_exact_geq(InequalityReport& report, double point, const Rational& lhs,
                      const Rational& rhs) {
    double lhs_d = to_double(lhs);
    double rhs_d = to_double(rhs);
    if (lhs >= rhs)
        report.record(point, std::max(lhs_d, rhs_d), rhs_d);
    else
        report.record(point, std::min(lhs_d, std::nextafter(rhs_d, -1e300)), rhs_d);
}

}  // namespace

U2Evaluator::U2Evaluator(double cell_tol) : exact_(0), cell_tol_(cell_tol) {
    if (cell_tol <= 0.0) throw UsageError("u2 cell tolerance must be positive");
    cell_value_.push_back(1.0);  // sigma = 1 on (0, 1]
    half_F_.push_back(0.0);
    u2_prefix_.push_back(0.0);
    u2_prefix_err_.push_back(0.0);
    u2_prefix_evals_.push_back(0);
}

double U2Evaluator::B(double y) {
    double ya = std::abs(y);  // B is even: the integrand b is odd
    if (!(ya < 1e9)) throw UsageError("B argument must be finite and moderate");
    long m = static_cast<long>(std::floor(ya));
    if (m >= static_cast<long>(cell_value_.size())) extend_prefix(m);
    double s = ya - static_cast<double>(m);
    double q = (s <= 0.5) ? s * s : (-s * s + 2.0 * s - 0.5);
    return half_F_[static_cast<std::size_t>(m)] +
           cell_value_[static_cast<std::size_t>(m)] * q;
}

void U2Evaluator::extend_prefix(long m) {
    // Materialize exact cell data for cells 0..m and halved prefix values
    // F(j)/2 for j = 0..m.
    exact_.ensure_covers(Rational(BigInt(m + 1)));
    for (long j = static_cast<long>(cell_value_.size()); j <= m; ++j) {
        cell_value_.push_back(to_double(exact_.sigma().cell(j)));
        half_F_.push_back(to_double(exact_.F_integer(j) / 2));
    }
}

void U2Evaluator::ensure_integer(long m) {
    if (m < 0) throw UsageError("u2 prefix index must be nonnegative");
    if (m < static_cast<long>(cell_value_.size()) && m <= covered_) return;
    extend_prefix(m);
    auto f = [this](double y) { return integrand(y); };
    for (long j = covered_; j < m; ++j) {
        // One cell (j, j+1); B is smooth on each half, kink at j + 1/2.
        QuadratureResult piece =
            integrate_with_breakpoints(f, static_cast<double>(j),
                                       static_cast<double>(j + 1),
                                       {static_cast<double>(j) + 0.5}, cell_tol_);
        u2_prefix_.push_back(u2_prefix_.back() + piece.value);
        u2_prefix_err_.push_back(u2_prefix_err_.back() + piece.error_estimate);
        u2_prefix_evals_.push_back(u2_prefix_evals_.back() + piece.evaluations);
    }
    covered_ = std::max(covered_, m);
}

QuadratureResult U2Evaluator::value_at(double x, double tol) {
    if (tol <= 0.0) throw UsageError("u2 tolerance must be positive");
    if (!std::isfinite(x)) throw UsageError("u2 argument must be finite");
    double sign = 1.0;
    double xa = x;
    if (x < 0.0) {  // u2 is odd: b odd makes the integrand even
        sign = -1.0;
        xa = -x;
    }
    long m = static_cast<long>(std::floor(xa));
    for (int attempt = 0;; ++attempt) {
        ensure_integer(m);
        QuadratureResult partial;
        if (xa > static_cast<double>(m)) {
            auto f = [this](double y) { return integrand(y); };
            partial = integrate_with_breakpoints(
                f, static_cast<double>(m), xa,
                {static_cast<double>(m) + 0.5}, 0.25 * tol);
        }
        double err = u2_prefix_err_[static_cast<std::size_t>(m)] + partial.error_estimate;
        if (err <= tol) {
            QuadratureResult out;
            out.value = sign * (u2_prefix_[static_cast<std::size_t>(m)] + partial.value);
            out.error_estimate = err;
            out.evaluations = u2_prefix_evals_[static_cast<std::size_t>(m)] + partial.evaluations;
            return out;
        }
        if (attempt >= 2)
            throw NumericalFailure("u2 quadrature cannot reach requested tolerance");
        // Rebuild the integer prefix with a tighter per-cell budget.
        cell_tol_ = std::min(cell_tol_ / 16.0, 0.25 * tol / static_cast<double>(m + 1));
        u2_prefix_.assign(1, 0.0);
        u2_prefix_err_.assign(1, 0.0);
        u2_prefix_evals_.assign(1, 0);
        covered_ = 0;
    }
}

QuadratureResult U2Evaluator::integrate_exp_neg_B(double a, double b, double tol) {
    double reach = std::max(std::abs(a), std::abs(b));
    extend_prefix(static_cast<long>(std::floor(reach)) + 1);
    auto f = [this](double y) { return integrand(y); };
    return integrate_with_breakpoints(f, a, b, half_integer_breakpoints(a, b), tol);
}

double U2Evaluator::window_sup_b(double x_max) {
    if (x_max < 0.0) throw UsageError("window bound must be nonnegative");
    long hi = static_cast<long>(std::ceil(x_max));
    exact_.ensure_covers(Rational(BigInt(hi)));
    // sup over a union of whole cells: z reaches 1 inside every cell, so
    // sup |b| there is the largest |cell value| of sigma.
    Rational sup = 0;
    for (long m = -hi; m < hi; ++m) {
        Rational v = abs(exact_.sigma().cell(m));
        if (v > sup) sup = v;
    }
    return round_up(to_double(sup));
}

InequalityReport verify_intf(long x_max) {
    if (x_max < 1) throw UsageError("intf check needs x_max >= 1");
    InequalityReport report;
    report.claim_id = "prefix-integral-lower-bound[F(m) >= m/(2(log3 m+1)^2)]";
    PrefixTable table(0);
    table.ensure_covers(Rational(BigInt(x_max)));
    for (long m = 1; m <= x_max; ++m) {
        Rational F = table.F_integer(m);
        long double lm = std::log(static_cast<long double>(m)) / std::log(3.0L) + 1.0L;
        double rhs_up = round_up(static_cast<double>(static_cast<long double>(m) /
                                                     (2.0L * lm * lm)));
        // Exact rational F against the rounded-up right side: conservative.
        record_exact_geq(report, static_cast<double>(m), F, rational_from_double(rhs_up));
    }
    return report;
}

InequalityReport verify_intn(unsigned n, unsigned samples_per_cell) {
    if (n < 1) throw UsageError("intn check needs n >= 1");
    InequalityReport report;
    report.claim_id = "prefix-integral-lower-bound[F(y) >= y/(2n^2)], n=" + std::to_string(n);
    PrefixTable table(n);
    const long width = pow3_i64(n);
    const Rational denom = make_rational(1, 2L * static_cast<long>(n) * static_cast<long>(n));
    auto check = [&](const Rational& y) {
        record_exact_geq(report, to_double(y), table.F_at(y), y * denom);
    };
    for (long m = 0; m <= width; ++m) {
        check(Rational(BigInt(m)));
        if (m < width)
            for (unsigned j = 1; j <= samples_per_cell; ++j)
                check(Rational(BigInt(m)) +
                      make_rational(static_cast<long>(j),
                                    static_cast<long>(samples_per_cell) + 1));
    }
    return report;
}

InequalityReport verify_approximation(unsigned n, unsigned window_exponent) {
    InequalityReport report;
    report.claim_id = "approximation[sup|sigma-phi_n| <= tail], n=" + std::to_string(n) +
                      ", window=3^" + std::to_string(window_exponent);
    Rational sup_sigma = sup_diff_sigma_phi(n, window_exponent);
    RationalBracket tail = zeta2_tail_bracket(n);
    // sup <= lower end of the bracket implies sup <= the true tail.
    record_exact_geq(report, static_cast<double>(n), tail.lo, sup_sigma);
    Rational sup_b = sup_diff_b_psi(n, window_exponent);
    record_exact_geq(report, static_cast<double>(n), sup_sigma, sup_b);
    return report;
}

double u2_bound_integrand(double y) {
    if (y < 1.0) throw UsageError("bound integrand is only used for y >= 1");
    double l = log3(y) + 1.0;
    return std::exp(-(y - 1.0) / (4.0 * l * l));
}

double u2_upper_bound(double tol) {
    if (tol <= 0.0) throw UsageError("bound tolerance must be positive");
    // Remainder of int_Y^inf exp(-(y-1)/(4 (log_3 y+1)^2)) dy for Y >= 3^8:
    // there (log_3 y + 1)^2 <= sqrt(y) (equality at 3^8, the ratio is
    // increasing past y ~ 18), so the integrand is at most
    // e^{1/324} exp(-sqrt(y)/4) and the substitution s = sqrt(y) gives
    // remainder <= e^{1/324} * 8 * (sqrt(Y) + 4) * exp(-sqrt(Y)/4).
    auto remainder_bound = [](double Y) {
        double T = std::sqrt(Y);
        return std::exp(1.0 / 324.0) * 8.0 * (T + 4.0) * std::exp(-T / 4.0);
    };
    double Y = 0.0, remainder = 0.0;
    bool certified = false;
    for (unsigned k = 8; k <= 14; ++k) {
        Y = static_cast<double>(pow3_i64(k));
        remainder = remainder_bound(Y);
        if (remainder <= 0.5 * tol) {
            certified = true;
            break;
        }
    }
    if (!certified)
        throw NumericalFailure("cannot certify the improper-integral remainder below tol");
    QuadratureResult body = integrate_adaptive(u2_bound_integrand, 1.0, Y, 0.5 * tol);
    double norm_up = round_up(to_double(sigma_sup_norm_bracket().hi));
    // On [0,1] the exponent B is nonnegative (first cell of the prefix
    // integral), so that piece of u2 is at most 1 and needs no e^{||b||}
    // factor. The factor applies only where the displayed lower bound for B
    // (valid for y >= 1) is used. Starting the integral at 0 instead would
    // diverge: the exponent blows up where log_3 y + 1 vanishes (y = 1/3).
    return 1.0 + round_up(std::exp(norm_up)) *
                     (body.value + body.error_estimate + remainder);
}

BLowerBoundReport verify_b_integral_lower_bound(const std::vector<double>& x_list) {
    BLowerBoundReport out;
    out.global_norm.claim_id = "b-prefix-lower-bound[global norm bracket]";
    out.window_sup.claim_id = "b-prefix-lower-bound[window-exact norm]";
    if (x_list.empty()) return out;
    double x_max = 0.0;
    for (double x : x_list) {
        if (x < 1.0) throw UsageError("b lower bound is stated for x >= 1");
        x_max = std::max(x_max, x);
    }
    PrefixTable table(0);
    table.ensure_covers(rational_from_double(x_max));
    // Smaller norm value => larger right side => stronger claim. The lower
    // bracket end is the conservative reading of the global norm; the exact
    // window sup (<= the global norm) is stronger still.
    double norm_global = round_down(to_double(sigma_sup_norm_bracket().lo));
    U2Evaluator ev;
    double norm_window = ev.window_sup_b(x_max);
    for (double x : x_list) {
        double lhs = round_down(to_double(table.B_at(rational_from_double(x))));
        double a_up = bound_numerator_up(x);
        out.global_norm.record(x, lhs, a_up - norm_global);
        out.window_sup.record(x, lhs, a_up - round_down(norm_window));
    }
    return out;
}

SweepResult u2_boundedness_sweep(double x_max, double step, double tol,
                                 unsigned mirrored_pairs) {
    if (x_max < 1.0) throw UsageError("sweep needs x_max >= 1");
    if (step <= 0.0) throw UsageError("sweep step must be positive");
    SweepResult result;
    result.report.claim_id = "u2-boundedness-sweep";
    U2Evaluator ev(std::min(1e-13, 0.125 * tol / x_max));
    const long total = static_cast<long>(std::floor(x_max / step + 0.5));
    double prev = 0.0;
    result.samples.reserve(static_cast<std::size_t>(total) + 1);
    for (long k = 0; k <= total; ++k) {
        double x = std::min(static_cast<double>(k) * step, x_max);
        QuadratureResult r = ev.value_at(x, tol);
        result.samples.push_back({x, r.value, r.error_estimate});
        result.max_u2 = std::max(result.max_u2, r.value);
        if (k > 0) {
            // Strict increase: require more than the previous value by at
            // least one ulp.
            result.report.record(x, r.value, std::nextafter(prev, 1e300));
        }
        prev = r.value;
    }
    result.upper_bound = u2_upper_bound(1e-8);
    result.report.record(x_max, result.upper_bound, result.max_u2);
    for (unsigned j = 1; j <= mirrored_pairs; ++j) {
        double x = x_max * static_cast<double>(j) / static_cast<double>(mirrored_pairs);
        // Direct quadrature over [0, -x] (no oddness shortcut) against the
        // shortcut value: the two must cancel to quadrature accuracy.
        double direct = ev.integrate_exp_neg_B(0.0, -x, tol).value;
        double shortcut = ev.value_at(x, tol).value;
        result.report.record(-x, 2.0 * tol, std::abs(direct + shortcut));
    }
    return result;
}

}  // namespace liouville
