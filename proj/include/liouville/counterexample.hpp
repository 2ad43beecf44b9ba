#pragma once

// The bounded, strictly increasing, non-almost-periodic solution
// u2(x) = int_0^x exp(-B(y)) dy of u'' + b u' = 0, together with the
// quantitative inequalities that make the construction work: the prefix
// integral lower bounds, the approximation bound for the periodic
// truncations, and the explicit upper bound for sup u2.

#include <cmath>
#include <vector>

#include "liouville/quadrature.hpp"
#include "liouville/rational.hpp"
#include "liouville/report.hpp"
#include "liouville/sigma.hpp"

namespace liouville {

// Evaluates u2 via closed-form B (exact tables converted to double) and
// adaptive quadrature of exp(-B). Integer-point prefix values of u2 are
// cached, so sweeps cost one partial-cell integral per query.
class U2Evaluator {
  public:
    // cell_tol: absolute quadrature budget per unit cell of the cached
    // prefix; the default leaves headroom below every tolerance used here.
    explicit U2Evaluator(double cell_tol = 1e-13);

    // u2(x) to absolute tolerance tol. Negative x uses oddness of u2
    // (the integrand is even), mirroring the closed-form argument.
    QuadratureResult value_at(double x, double tol);

    // int_a^b exp(-B(y)) dy by direct quadrature, no oddness shortcut;
    // independent path used to test the shortcut.
    QuadratureResult integrate_exp_neg_B(double a, double b, double tol);

    // Closed-form B(y) = int_0^y b: even, piecewise quadratic.
    double B(double y);

    double integrand(double y) { return std::exp(-B(y)); }

    // Exact sup of |b| over [-x_max, x_max] rounded up to double. Tighter
    // than the global norm bracket on small windows.
    double window_sup_b(double x_max);

    // Largest integer whose prefix data is materialized.
    long covered() const { return covered_; }

  private:
    void ensure_integer(long m);
    void extend_prefix(long m);

    PrefixTable exact_;
    std::vector<double> cell_value_;  // sigma cell values v_m, m >= 0
    std::vector<double> half_F_;      // F(m)/2, m >= 0
    std::vector<double> u2_prefix_;   // u2(m)
    std::vector<double> u2_prefix_err_;
    std::vector<long> u2_prefix_evals_;
    double cell_tol_;
    long covered_ = 0;
};

// F(m) >= m / (2 (log_3 m + 1)^2) for every integer m in [1, x_max].
// F is exact rational; the right side is evaluated in extended precision
// and rounded up before the comparison, so a pass is conservative.
InequalityReport verify_intf(long x_max);

// F(y) >= y / (2 n^2) on [0, 3^n], checked entirely in rationals at all
// cell endpoints plus samples_per_cell interior points per cell (F is
// piecewise linear, so endpoints already decide the inequality; interior
// samples are corroboration).
InequalityReport verify_intn(unsigned n, unsigned samples_per_cell);

// Exact sup |sigma - phi_n| over (-3^w, 3^w] against the inverse-square
// tail bracket, plus sup |b - psi_n| <= sup |sigma - phi_n| on the same
// window.
InequalityReport verify_approximation(unsigned n, unsigned window_exponent);

// Explicit upper bound B* for sup u2. The two factors:
//   * on [0, 1]: B >= 0, so that piece of u2 is at most 1;
//   * on [1, inf): B(y) >= (y-1)/(4 (log_3 y + 1)^2) - ||b||, giving
//     e^{||b||} int_1^inf exp(-(y-1)/(4 (log_3 y + 1)^2)) dy.
// The integrand's antiderivative has no closed form; the improper integral
// is truncated at Y = 3^K once the analytic remainder bound
//   (log_3 y + 1)^2 <= sqrt(y) for y >= 3^8
// certifies the tail below tol. Note the bound must start at y = 1: the
// same integrand is non-integrable across y = 1/3 (the exponent blows up
// where log_3 y + 1 vanishes), so the displayed integral cannot be taken
// from 0.
double u2_upper_bound(double tol);

// The integrand exp(-(y-1)/(4 (log_3 y + 1)^2)) of the bound above, y >= 1.
double u2_bound_integrand(double y);

// B(x) >= (x-1)/(4 (log_3 x + 1)^2) - ||b|| at each listed x >= 1, with B
// exact and the right side rounded up. Checked twice: against the lower
// end of the global norm bracket (conservative reading of the displayed
// inequality) and against the exact window sup of |b| (sharper norm, hence
// a stronger claim).
struct BLowerBoundReport {
    InequalityReport global_norm;  // ||b|| -> lower end of 1 + pi^2/6 bracket
    InequalityReport window_sup;   // ||b|| -> exact sup over the sampled window
    bool passed() const { return global_norm.passed() && window_sup.passed(); }
};
BLowerBoundReport verify_b_integral_lower_bound(const std::vector<double>& x_list);

struct SweepSample {
    double x = 0.0;
    double u2 = 0.0;
    double error_estimate = 0.0;
};

// Sweep of u2 over [0, x_max]: strict increase along the sweep, oddness
// residual at mirrored pairs (direct negative-side quadrature versus the
// oddness shortcut), and sup <= u2_upper_bound.
struct SweepResult {
    InequalityReport report;
    std::vector<SweepSample> samples;
    double max_u2 = 0.0;
    double upper_bound = 0.0;
};
SweepResult u2_boundedness_sweep(double x_max, double step, double tol,
                                 unsigned mirrored_pairs = 100);

}  // namespace liouville
