#pragma once

// Translation-number scanning: detects eps-almost periods of a sampled
// function (sup |f(.+tau) - f| <= eps over a window), scans ranges of tau,
// certifies a quantitative witness that u2 has no large almost periods, and
// probes translate families for the compact-convergence / full-window
// separation pattern that distinguishes almost periodicity from mere local
// precompactness.

#include <functional>
#include <vector>

#include "liouville/counterexample.hpp"
#include "liouville/rational.hpp"
#include "liouville/report.hpp"

namespace liouville {

struct SampledFunction {
    std::function<double(double)> eval;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double step = 1.0;
    // When set, the function is piecewise linear with kinks only at
    // multiples of 1/2 (the construction's lattice); the scanner then
    // evaluates at every kink of f and of its translate, which makes the
    // grid supremum the exact supremum.
    bool half_integer_kinks = false;
};

// Max over the scan grid of |f(x+tau) - f(x)|, both points kept inside the
// window. A lower bound for the true sup in general; exact for
// half_integer_kinks inputs (see above). Throws UsageError when the window
// cannot accommodate the shift.
double sup_translate_diff(const SampledFunction& f, double tau);

struct AlmostPeriodReport {
    double epsilon = 0.0;
    double tau_lo = 0.0;
    double tau_hi = 0.0;
    double tau_step = 0.0;
    long taus_scanned = 0;
    std::vector<double> taus_found;
    // Largest interval inside [tau_lo, tau_hi] free of found almost
    // periods, including the stretches before the first and after the last
    // find; this is the quantity relative density is about.
    double max_gap = 0.0;
};

AlmostPeriodReport scan_almost_periods(const SampledFunction& f, double eps,
                                       double tau_lo, double tau_hi,
                                       double tau_step);

// Quantitative witness that u2 admits no eps0-almost period with |tau| >= 1
// for eps0 = 2 u2(1/2): since u2 is odd and strictly increasing,
//   sup |u2(.+tau) - u2| >= u2(tau/2) - u2(-tau/2) = 2 u2(tau/2) >= 2 u2(1/2).
// Checks 2 u2(tau/2) >= 2 u2(1/2) - 2 tol for each listed tau.
InequalityReport non_ap_witness_u2(U2Evaluator& u2, const std::vector<double>& tau_list,
                                   double tol);

struct BochnerPairDistance {
    std::size_t i = 0;
    std::size_t j = 0;
    double compact = 0.0;  // sup over the compact window
    double full = 0.0;     // sup over the whole sampling window
};

struct BochnerReport {
    std::vector<double> shifts;
    std::vector<BochnerPairDistance> pairs;
    double compact_lo = 0.0;
    double compact_hi = 0.0;
    double min_compact = 0.0;
    double full_at_min_compact = 0.0;
    // Set when some pair of translates is compact_tol-close on the compact
    // window yet full_sep-separated on the full window: translates that
    // converge locally but not uniformly, the failure mode of almost
    // periodicity.
    bool local_convergence_without_uniform = false;
};

// Pairwise translate distances of f over shifts, on a compact subwindow and
// on the full window.
BochnerReport bochner_probe(const SampledFunction& f, const std::vector<double>& shifts,
                            double compact_lo, double compact_hi,
                            double compact_tol, double full_sep);

// Exact rational sup over the window (-3^w, 3^w] of |b(x+tau) - b(x)|,
// evaluated on the union of the kink lattices of b and of its translate
// (plus window endpoints), which attains the sup because the difference is
// piecewise linear.
Rational sup_translate_diff_b_exact(const Rational& tau, unsigned window_exponent);

}  // namespace liouville
