#pragma once

// Time stepping for the periodic parabolic problem du/dt = A u + f on the
// torus grid and its zero-Dirichlet truncations on expanding intervals,
// plus the experiment drivers built on it: relaxation to stationary /
// time-periodic states, truncation convergence with a supersolution bound,
// homogeneous decay at the principal-eigenvalue rate, and the response to
// almost periodic forcing.

#include <vector>

#include "liouville/almost_period.hpp"
#include "liouville/fourier.hpp"
#include "liouville/grid.hpp"
#include "liouville/report.hpp"
#include "liouville/spectra.hpp"

namespace liouville {

enum class TimeScheme { implicit_euler, crank_nicolson };

// One term amp * sin(freq t) or amp * cos(freq t); frequencies are stored
// exactly as given (no re-normalization), so incommensurate inputs stay
// incommensurate.
struct TimeSinusoid {
    double freq = 0.0;
    double amp = 0.0;
    bool use_cos = false;
};

// Separable forcing f(x, t) = space(x) * (offset + sum of sinusoids in t).
struct ForcingField {
    FourierSeries space = FourierSeries::constant(1.0);
    double offset = 1.0;
    std::vector<TimeSinusoid> waves;

    bool time_independent() const { return waves.empty(); }
    bool identically_zero() const;
    double time_factor(double t) const;
    double operator()(double x, double t) const { return space(x) * time_factor(t); }
    // Rigorous sup bound over all (x, t): space amplitude bound times
    // (|offset| + sum |amp|).
    double sup_bound() const;

    static ForcingField constant(double value, double period = 1.0);
    static ForcingField space_profile(FourierSeries s);  // time factor == 1
};

struct EvolutionState {
    double t = 0.0;
    std::vector<double> u;
    double dt = 0.0;
    TimeScheme scheme = TimeScheme::implicit_euler;
};

EvolutionState make_state(const TorusGrid& grid, std::vector<double> u0, double dt,
                          TimeScheme scheme = TimeScheme::implicit_euler);

// One implicit step of du/dt = A u + f. Implicit Euler solves
// (I - dt A) u+ = u + dt f(t+dt); Crank-Nicolson averages the two levels.
// The system matrix must stay an M-matrix (dt small enough for the
// zero-order term); a lost pivot raises NumericalFailure.
EvolutionState step(EvolutionState state, const DiscreteOperator& op,
                    const ForcingField& f);

struct RelaxResult {
    bool converged = false;
    EvolutionState final_state;
    double residual = 0.0;   // ||A u + f||_inf at the final iterate
    double last_diff = 0.0;  // last checked ||u(t+1) - u(t)||_inf
    // Spatial mean at integer times (diagnostic for the non-convergent
    // constant-forcing case, whose mean grows linearly).
    std::vector<double> mean_times;
    std::vector<double> mean_values;
    double mean_slope = 0.0;  // least-squares slope over [fit_lo, fit_hi]
    double fit_lo = 0.0, fit_hi = 0.0;
};

// Steps a time-independent problem until successive unit-time snapshots
// agree within tol. Requires either c <= 0 on the grid or a positive
// principal eigenvalue passed as lambda_p_hint. Non-convergence by t_max is
// reported via converged = false (with the mean-growth diagnostics filled
// in) rather than thrown, so the expected-failure cases stay inspectable;
// callers that need the error semantics check the flag.
RelaxResult relax_to_stationary(const DiscreteOperator& op, const ForcingField& f,
                                std::vector<double> u0, double tol, double t_max,
                                double lambda_p_hint =
                                    std::numeric_limits<double>::quiet_NaN(),
                                double slope_fit_lo = 10.0, double slope_fit_hi = 50.0,
                                TimeScheme scheme = TimeScheme::implicit_euler);

struct PeriodicOrbitResult {
    bool converged = false;
    int cycles = 0;
    double period = 0.0;
    double dt = 0.0;  // adjusted so an integer number of steps tiles the period
    std::vector<double> cycle_diffs;  // ||u(t+T) - u(t)||_inf per cycle
    // One sampled period after convergence: orbit[k] is u at time
    // orbit_times[k] past the cycle start, k = 0..steps (both ends stored).
    std::vector<double> orbit_times;
    std::vector<std::vector<double>> orbit;
    double closure_error = 0.0;          // ||orbit.front() - orbit.back()||_inf
    double contraction_ratio_max = 0.0;  // max diff ratio once diffs < 10 tol
};

// Iterates the period map until ||u(t+T) - u(t)||_inf <= tol; the attracting
// case, so lambda_p > 0 (computed by the caller's eigensolve) is required.
// Throws NumericalFailure when cycles_max is exceeded.
PeriodicOrbitResult relax_to_time_periodic(const DiscreteOperator& op,
                                           const ForcingField& f, double period_T,
                                           std::vector<double> u0, double tol,
                                           int cycles_max, double dt_target,
                                           double lambda_p);

struct TruncationResult {
    std::vector<double> r_values;
    double h = 0.0, dt = 0.0, t_final = 0.0;
    double lambda_p = 0.0;  // torus principal eigenvalue at the same spacing
    double min_phi = 0.0, max_phi = 0.0;
    double f_sup = 0.0;
    double factor = 0.0;  // f_sup / (lambda_p * min_phi)
    std::vector<double> core_nodes;
    std::vector<std::vector<double>> core_values;  // per r, at final time
    std::vector<double> successive_diffs;          // core sup differences
    // Supersolution domination |u_r| <= factor * phi_p at every node and
    // every step; slack is the worst |u| - v seen (roundoff-level when the
    // bound holds).
    double domination_slack = 0.0;
    InequalityReport domination;
    InequalityReport diffs_decreasing;
};

// Solves the zero-data Dirichlet problems on [-r, r] for each r, all with
// the same spacing, step size and final time, and compares the results on
// the common core [-r0, r0]. Each r must sit on the node lattice.
TruncationResult dirichlet_truncation(const CoefficientField& coeffs,
                                      const ForcingField& f,
                                      const std::vector<double>& r_list,
                                      int cell_resolution, double tol);

struct DecayReport {
    double lambda_p = 0.0;
    double t_final = 0.0, fit_lo = 0.0, fit_hi = 0.0;
    std::vector<double> rates;         // fitted decay rate per initial datum
    std::vector<double> terminal_sup;  // ||u(t_final)||_inf per initial datum
    bool max_principle_ok = true;      // sup norm nonincreasing at every step
    long max_principle_checks = 0;
    InequalityReport rate_within;  // |rate - lambda_p| <= rel_tol * lambda_p
};

// Homogeneous evolution from seeded random bounded initial data; fits the
// sup-norm decay rate over [fit_lo, fit_hi] and compares it with the
// eigensolver's lambda_p on the same grid. Requires c <= 0, c not
// identically 0 on the grid.
DecayReport liouville_decay(const CoefficientField& coeffs, const TorusGrid& grid,
                            int n_runs, unsigned seed, double t_final, double fit_lo,
                            double fit_hi, double rel_tol);

struct ApForcingReport {
    double lambda_p = 0.0;
    double warmup = 0.0, t_end = 0.0;
    int probe_index = 0;
    double response_sup = 0.0;    // over the scan window, at the probe node
    double response_bound = 0.0;  // supersolution bound for the whole field
    bool response_bounded = false;
    bool decayed = false;  // f == 0 case: response fell below tol, scan skipped
    AlmostPeriodReport scan;
    // Integer combinations of the forcing quasi-periods that the forcing
    // structure predicts as almost periods, and how many the scan confirmed
    // within match_radius.
    std::vector<double> predicted;
    double match_radius = 0.0;
    long predicted_matched = 0;
    InequalityReport report;  // boundedness and predicted-match claims
};

// Integrates the forced problem past a warmup of max(10 / lambda_p, 10),
// records the time trace at node 0 over a window long enough for the tau
// scan, and hands it to the almost-period scanner.
ApForcingReport ap_forcing_experiment(const CoefficientField& coeffs,
                                      const ForcingField& f, const TorusGrid& grid,
                                      double eps, double tau_max, double tau_step,
                                      double tol);

}  // namespace liouville
