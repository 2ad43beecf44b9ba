#pragma once

// Gauss-Legendre quadrature with adaptive bisection. Integrands here are
// smooth between explicitly listed breakpoints (integer/half-integer kinks
// of the piecewise construction), so the caller passes those breakpoints
// and each smooth piece converges at spectral rate.

#include <functional>
#include <vector>

namespace liouville {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // accumulated local estimates, not a bound
    long evaluations = 0;

    QuadratureResult& operator+=(const QuadratureResult& other) {
        value += other.value;
        error_estimate += other.error_estimate;
        evaluations += other.evaluations;
        return *this;
    }
};

// Nodes and weights on [-1, 1], computed once per order by Newton iteration
// on the Legendre polynomial and cached for the process lifetime.
class GaussLegendre {
  public:
    static const GaussLegendre& of_order(int order);

    int order() const { return static_cast<int>(nodes_.size()); }
    // Plain (non-adaptive) rule application on [a, b].
    double apply(const std::function<double(double)>& f, double a, double b) const;

  private:
    explicit GaussLegendre(int order);
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Adaptive integration of f over [a, b]. Each subinterval is accepted when
// the discrepancy between the one-panel rule and its two-half refinement is
// below the locally apportioned share of abs_tol.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int order = 15, int max_depth = 48);

// Adaptive integration split first at the interior breakpoints, so that no
// panel straddles a kink. Breakpoints outside (a, b) are ignored; the list
// need not be sorted.
QuadratureResult integrate_with_breakpoints(const std::function<double(double)>& f,
                                            double a, double b,
                                            std::vector<double> breakpoints,
                                            double abs_tol, int order = 15);

// Convenience: all multiples of 1/2 in (a, b), the kink lattice of the
// triangle-wave construction.
std::vector<double> half_integer_breakpoints(double a, double b);

}  // namespace liouville
