#pragma once

// Finite-difference realization of periodic elliptic operators
// L = a d^2 + b d + c on the 1D torus (with a tensor-grid 2D variant) and
// the principal eigenpair of -L: the unique eigenvalue carrying a positive
// periodic eigenvector, computed by inverse power iteration on a shifted
// M-matrix with Collatz-Wielandt bracketing.

#include <vector>

#include "liouville/fourier.hpp"
#include "liouville/grid.hpp"
#include "liouville/report.hpp"

namespace liouville {

enum class Scheme { upwind, centered };

struct CoefficientField {
    FourierSeries a;  // diffusion, must be positive
    FourierSeries b;  // drift
    FourierSeries c;  // zero order
    double period = 1.0;
    double ul_a = 0.0;  // grid-scan ellipticity bounds
    double ol_a = 0.0;

    // Validates positivity of a on a fine grid and records the bounds.
    static CoefficientField make(FourierSeries a, FourierSeries b, FourierSeries c);
    int max_mode() const;
    CoefficientField translated(double offset) const;  // x -> x + offset
    CoefficientField shifted_c(double gamma) const;    // c -> c + gamma
};

// Cyclic tridiagonal matrix A approximating L on the torus grid:
// (A u)_i = sub[i] u_{i-1} + diag[i] u_i + sup[i] u_{i+1}, indices wrapping.
struct DiscreteOperator {
    TorusGrid grid;
    Scheme scheme = Scheme::upwind;
    bool peclet_warning = false;  // centered scheme with cell Peclet >= 2
    std::vector<double> sub, diag, sup;
    std::vector<double> c_values;

    std::size_t size() const { return diag.size(); }
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    double max_c() const;
};

// One row of the finite-difference stencil for L at the point x with
// spacing h: (L u)(x) ~ sub u(x-h) + diag u(x) + sup u(x+h). peclet is set
// (never cleared) when the centered scheme sees cell Peclet >= 2.
struct StencilRow {
    double sub = 0.0, diag = 0.0, sup = 0.0;
    double c = 0.0;
};
StencilRow stencil_row(const CoefficientField& coeffs, double x, double h, Scheme scheme,
                       bool& peclet);

// Second-order centered stencil for a d^2; drift by first-order upwind
// (default, keeps off-diagonals nonnegative) or second-order centered;
// c on the diagonal. Requires the grid to resolve the coefficients
// (n >= 4 x highest mode).
DiscreteOperator discretize(const CoefficientField& coeffs, const TorusGrid& grid,
                            Scheme scheme = Scheme::upwind);

struct EigenPair {
    double lambda_p = 0.0;
    std::vector<double> phi_p;  // positive, sup-normalized
    double residual = 0.0;      // ||(-A) phi - lambda phi||_inf
    int iterations = 0;
    double bracket_width = 0.0;  // final Collatz-Wielandt bracket width
};

// Principal eigenpair of -A: inverse power iteration on M = s I - A with
// s > max(|diag(-A)|, max c) + 1, which makes M a strictly diagonally
// dominant M-matrix, so M^{-1} is positive and the iteration converges to
// the positive eigenvector. The Collatz-Wielandt ratios bracket the
// eigenvalue at every step; convergence requires bracket width <= tol,
// successive estimates within tol and residual <= 10 tol.
EigenPair principal_eigenpair(const DiscreteOperator& op, double tol, int max_iter);

struct ShiftCheckReport {
    double gamma = 0.0;
    double lambda_base = 0.0;
    double lambda_shifted = 0.0;
    double identity_error = 0.0;  // |lambda(c+gamma) - (lambda(c) - gamma)|
    bool c_nonpositive = false;
    bool c_not_identically_zero = false;
    double positivity_margin = 0.0;  // lambda_base when the sign claim applies
    InequalityReport report;
};

// Checks the diagonal shift identity lambda_p(c + gamma) = lambda_p(c) -
// gamma and, when c <= 0 with c not identically 0 on the grid, that
// lambda_p > 0.
ShiftCheckReport shift_invariance_check(const CoefficientField& coeffs, double gamma,
                                        const TorusGrid& grid, double tol);

struct RefinementRow {
    int n = 0;
    double lambda = 0.0;
    double diff_prev = 0.0;       // |lambda_n - lambda_previous|
    double observed_order = 0.0;  // from successive diff ratios
};

std::vector<RefinementRow> refinement_study(const CoefficientField& coeffs,
                                            const std::vector<int>& sizes, double tol,
                                            Scheme scheme);

// ---- 2D tensor-grid variant (5-point stencil) ----

struct SeparableField2D {
    // Sum of separable terms amp * Tx(kx 2 pi x / Px) * Ty(ky 2 pi y / Py)
    // where T is cos or sin (k = 0 with cos meaning the constant factor 1).
    struct Term {
        double amp = 0.0;
        int kx = 0, ky = 0;
        bool sin_x = false, sin_y = false;
    };
    double period_x = 1.0, period_y = 1.0;
    double a0 = 0.0;
    std::vector<Term> terms;

    double operator()(double x, double y) const;
    int max_mode() const;
    static SeparableField2D constant(double v);
};

struct CoefficientField2D {
    SeparableField2D a, bx, by, c;
    double period_x = 1.0, period_y = 1.0;
    double ul_a = 0.0, ol_a = 0.0;
    static CoefficientField2D make(SeparableField2D a, SeparableField2D bx,
                                   SeparableField2D by, SeparableField2D c);
};

struct DiscreteOperator2D {
    TorusGrid2D grid;
    Scheme scheme = Scheme::upwind;
    bool peclet_warning = false;
    // 5-point stencil bands, one value per node.
    std::vector<double> center, west, east, south, north, c_values;

    std::size_t size() const { return center.size(); }
    void apply(const std::vector<double>& u, std::vector<double>& out) const;
    double max_c() const;
    // Dense row-major matrix of A (size N x N); used for the eigensolve.
    std::vector<double> dense() const;
};

DiscreteOperator2D discretize_2d(const CoefficientField2D& coeffs,
                                 const TorusGrid2D& grid,
                                 Scheme scheme = Scheme::upwind);

EigenPair principal_eigenpair_2d(const DiscreteOperator2D& op, double tol,
                                 int max_iter);

}  // namespace liouville
