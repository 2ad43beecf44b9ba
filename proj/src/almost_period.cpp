#include "liouville/almost_period.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/sigma.hpp"

namespace liouville {

namespace {

// Max of |f(x+tau) - f(x)| for x in [a, b] on the uniform grid plus, for
// kink-aware functions, every half-integer in [a, b] and every point whose
// translate is a half-integer.
double sup_diff_on_range(const SampledFunction& f, double tau, double a, double b) {
    double sup = 0.0;
    auto probe = [&](double x) {
        double d = std::abs(f.eval(x + tau) - f.eval(x));
        if (d > sup) sup = d;
    };
    const long steps = static_cast<long>(std::floor((b - a) / f.step));
    for (long k = 0; k <= steps; ++k) probe(a + static_cast<double>(k) * f.step);
    probe(b);
    if (f.half_integer_kinks) {
        long j_lo = static_cast<long>(std::ceil(2.0 * a));
        long j_hi = static_cast<long>(std::floor(2.0 * b));
        for (long j = j_lo; j <= j_hi; ++j) probe(0.5 * static_cast<double>(j));
        j_lo = static_cast<long>(std::ceil(2.0 * (a + tau)));
        j_hi = static_cast<long>(std::floor(2.0 * (b + tau)));
        for (long j = j_lo; j <= j_hi; ++j) {
            double x = 0.5 * static_cast<double>(j) - tau;
            if (x >= a && x <= b) probe(x);
        }
    }
    return sup;
}

}  // namespace

double sup_translate_diff(const SampledFunction& f, double tau) {
    if (!(f.step > 0.0)) throw UsageError("sampled function needs a positive step");
    const double len = f.window_hi - f.window_lo;
    if (len < 2.0 * std::abs(tau))
        throw UsageError("window too small for the requested translation");
    // Keep both x and x + tau inside the window.
    double a = f.window_lo, b = f.window_hi - tau;
    if (tau < 0.0) {
        a = f.window_lo - tau;
        b = f.window_hi;
    }
    if (b < a) throw UsageError("window too small for the requested translation");
    return sup_diff_on_range(f, tau, a, b);
}

AlmostPeriodReport scan_almost_periods(const SampledFunction& f, double eps,
                                       double tau_lo, double tau_hi,
                                       double tau_step) {
    if (eps <= 0.0) throw UsageError("epsilon must be positive");
    if (tau_step <= 0.0) throw UsageError("tau step must be positive");
    if (tau_hi < tau_lo) throw UsageError("empty tau range");
    AlmostPeriodReport report;
    report.epsilon = eps;
    report.tau_lo = tau_lo;
    report.tau_hi = tau_hi;
    report.tau_step = tau_step;

    // Fast path: when every scanned tau is a whole number of sampling steps,
    // sample once and compare by index shifts.
    const double ratio = tau_step / f.step;
    const double lo_ratio = tau_lo / f.step;
    const bool aligned = !f.half_integer_kinks &&
                         std::abs(ratio - std::round(ratio)) < 1e-9 &&
                         std::abs(lo_ratio - std::round(lo_ratio)) < 1e-9;
    std::vector<double> table;
    long n_samples = 0;
    if (aligned) {
        n_samples = static_cast<long>(std::floor((f.window_hi - f.window_lo) / f.step)) + 1;
        table.resize(static_cast<std::size_t>(n_samples));
        for (long k = 0; k < n_samples; ++k)
            table[static_cast<std::size_t>(k)] =
                f.eval(f.window_lo + static_cast<double>(k) * f.step);
    }
    const long n_taus = static_cast<long>(std::floor((tau_hi - tau_lo) / tau_step + 0.5));
    for (long t = 0; t <= n_taus; ++t) {
        const double tau = tau_lo + static_cast<double>(t) * tau_step;
        if (f.window_hi - f.window_lo < 2.0 * std::abs(tau)) break;
        ++report.taus_scanned;
        double sup;
        if (aligned) {
            const long shift = static_cast<long>(std::llround(tau / f.step));
            sup = 0.0;
            for (long k = 0; k + shift < n_samples; ++k) {
                double d = std::abs(table[static_cast<std::size_t>(k + shift)] -
                                    table[static_cast<std::size_t>(k)]);
                if (d > sup) sup = d;
            }
        } else {
            sup = sup_translate_diff(f, tau);
        }
        if (sup <= eps) report.taus_found.push_back(tau);
    }
    // Gap accounting includes the leading and trailing stretches, so "no
    // finds" honestly reports the whole range as one gap.
    double last = tau_lo;
    double max_gap = 0.0;
    for (double tau : report.taus_found) {
        max_gap = std::max(max_gap, tau - last);
        last = tau;
    }
    max_gap = std::max(max_gap, tau_hi - last);
    report.max_gap = max_gap;
    return report;
}

InequalityReport non_ap_witness_u2(U2Evaluator& u2, const std::vector<double>& tau_list,
                                   double tol) {
    if (tol <= 0.0) throw UsageError("witness tolerance must be positive");
    InequalityReport report;
    report.claim_id = "u2-non-ap-witness[2 u2(tau/2) >= 2 u2(1/2) - 2 tol]";
    // Quadrature at tol/4 keeps the combined evaluation error below the
    // 2 tol slack even at the equality point tau = 1.
    const double qtol = 0.25 * tol;
    const double base = u2.value_at(0.5, qtol).value;
    for (double tau : tau_list) {
        if (tau < 1.0) throw UsageError("witness requires tau >= 1");
        double lhs = 2.0 * u2.value_at(0.5 * tau, qtol).value;
        report.record(tau, lhs, 2.0 * base - 2.0 * tol);
    }
    return report;
}

BochnerReport bochner_probe(const SampledFunction& f, const std::vector<double>& shifts,
                            double compact_lo, double compact_hi,
                            double compact_tol, double full_sep) {
    if (compact_hi <= compact_lo) throw UsageError("empty compact window");
    BochnerReport report;
    report.shifts = shifts;
    report.compact_lo = compact_lo;
    report.compact_hi = compact_hi;
    report.min_compact = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < shifts.size(); ++i) {
        for (std::size_t j = i + 1; j < shifts.size(); ++j) {
            // Distance of the translates f(. + s_i), f(. + s_j): reuse the
            // translate-difference scan with tau = s_j - s_i, offsetting the
            // ranges so that evaluation stays inside the sampling window.
            const double si = shifts[i], sj = shifts[j];
            const double tau = sj - si;
            BochnerPairDistance pair;
            pair.i = i;
            pair.j = j;
            pair.compact = sup_diff_on_range(f, tau, compact_lo + si, compact_hi + si);
            double a = f.window_lo - std::min(si, sj);
            double b = f.window_hi - std::max(si, sj);
            if (b < a) throw UsageError("window too small for the shift family");
            pair.full = sup_diff_on_range(f, tau, a + si, b + si);
            if (pair.compact < report.min_compact) {
                report.min_compact = pair.compact;
                report.full_at_min_compact = pair.full;
            }
            if (pair.compact <= compact_tol && pair.full >= full_sep)
                report.local_convergence_without_uniform = true;
            report.pairs.push_back(pair);
        }
    }
    return report;
}

Rational sup_translate_diff_b_exact(const Rational& tau_in, unsigned window_exponent) {
    Rational tau = abs(tau_in);
    const Rational W(pow3(window_exponent));
    if (tau > W) throw UsageError("translation exceeds the window half-width");
    unsigned table_exp = window_exponent;
    while (Rational(pow3(table_exp)) < W + tau) ++table_exp;
    SigmaTable table(table_exp);
    auto b_exact = [&](const Rational& x) -> Rational {
        Rational zz = z_at(x);
        if (zz == 0) return Rational(0);
        return table.at(x) * zz;
    };
    Rational sup = 0;
    auto probe = [&](const Rational& x) {
        Rational d = abs(b_exact(x + tau) - b_exact(x));
        if (d > sup) sup = d;
    };
    // x ranges over [-3^w, 3^w - tau] (b is continuous, so including the
    // closure of the half-open window only helps). Kinks of the difference
    // lie on the half-integers and on the half-integers shifted by -tau.
    const Rational x_lo = -W;
    const Rational x_hi = W - tau;
    const Rational half(1, 2);
    for (BigInt j = ceil_int(2 * x_lo); Rational(j) <= 2 * x_hi; ++j)
        probe(Rational(j) * half);
    if (!is_integer(2 * tau)) {
        for (BigInt j = ceil_int(2 * (x_lo + tau)); Rational(j) <= 2 * (x_hi + tau); ++j) {
            Rational x = Rational(j) * half - tau;
            if (x >= x_lo && x <= x_hi) probe(x);
        }
    }
    probe(x_lo);
    probe(x_hi);
    return sup;
}

}  // namespace liouville
