#include "liouville/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "liouville/banded.hpp"
#include "liouville/rational.hpp"

namespace liouville {

namespace {

constexpr std::size_t kDenseCap = 4096;  // dense 2D eigensolves beyond this are refused

void check_period_match(double grid_period, double field_period, const char* what) {
    const double scale = std::max(1.0, std::abs(field_period));
    if (std::abs(grid_period - field_period) > 1e-12 * scale)
        throw UsageError(std::string(what) + ": grid period does not match coefficient period");
}

// Shared inverse power iteration on M = s I - A (strictly diagonally dominant
// M-matrix, so M^{-1} > 0). solve_m(rhs) returns M^{-1} rhs; apply_minus_a
// writes (-A) u. The Collatz-Wielandt ratios of M^{-1} bracket rho(M^{-1})
// at every step, hence bracket lambda_p(-A) = 1/rho - s.
template <typename SolveM, typename ApplyMinusA>
EigenPair inverse_iterate(std::size_t n, double s, const SolveM& solve_m,
                          const ApplyMinusA& apply_minus_a, double tol, int max_iter) {
    if (!(tol > 0.0)) throw UsageError("eigensolver tolerance must be positive");
    if (max_iter < 1) throw UsageError("eigensolver iteration cap must be at least 1");

    std::vector<double> x(n, 1.0);
    std::vector<double> z(n, 0.0);
    double lambda_prev = std::numeric_limits<double>::quiet_NaN();
    double lambda = 0.0;
    double width = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= max_iter; ++iter) {
        std::vector<double> y = solve_m(x);
        double rmin = std::numeric_limits<double>::infinity();
        double rmax = 0.0;
        double ymax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(y[i] > 0.0))
                throw NumericalFailure(
                    "inverse iteration lost positivity; the discrete operator is not an "
                    "M-matrix at this resolution (centered drift with large cell Peclet?)");
            const double r = y[i] / x[i];
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
            ymax = std::max(ymax, y[i]);
        }
        const double lam_lo = 1.0 / rmax - s;
        const double lam_hi = 1.0 / rmin - s;
        width = lam_hi - lam_lo;
        lambda = 0.5 * (lam_lo + lam_hi);

        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ymax;

        apply_minus_a(x, z);
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            residual = std::max(residual, std::abs(z[i] - lambda * x[i]));

        // Floating point puts floors under every convergence measure: the
        // eigenvalue is recovered as 1/r - s, so its values (and hence the
        // bracket width and the settling difference) quantize at the ulp of
        // s + lambda, and a backward-stable apply cannot push the residual
        // below roughly eps * ||A||_inf (||A||_inf <= 2s by construction of
        // the shift). Demand the tolerance only down to those floors; the
        // reported width and residual stay as measured.
        const double eps = std::numeric_limits<double>::epsilon();
        const double lambda_floor = 4.0 * eps * s;
        const double residual_floor = 64.0 * eps * s;
        const bool settled = std::isfinite(lambda_prev) &&
                             std::abs(lambda - lambda_prev) <=
                                 std::max(tol, lambda_floor);
        if (width <= std::max(tol, lambda_floor) && settled &&
            residual <= std::max(10.0 * tol, residual_floor)) {
            EigenPair out;
            out.lambda_p = lambda;
            out.phi_p = std::move(x);
            out.residual = residual;
            out.iterations = iter;
            out.bracket_width = width;
            return out;
        }
        lambda_prev = lambda;
    }
    throw NumericalFailure(
        "principal eigenpair did not converge within the iteration cap (last bracket "
        "width " +
        format_full(width) + ", residual " + format_full(residual) + ")");
}

int per_axis_max_mode(const SeparableField2D& f, bool x_axis) {
    int m = 0;
    for (const auto& t : f.terms) m = std::max(m, x_axis ? t.kx : t.ky);
    return m;
}

}  // namespace

// ---- coefficient fields ----

CoefficientField CoefficientField::make(FourierSeries a, FourierSeries b, FourierSeries c) {
    CoefficientField out;
    out.period = a.period();
    if (!(out.period > 0.0)) throw UsageError("coefficient period must be positive");
    check_period_match(b.period(), out.period, "drift coefficient");
    check_period_match(c.period(), out.period, "zero-order coefficient");

    const int samples = std::max(4096, 64 * (a.max_mode() + 1));
    out.ul_a = a.min_on_grid(samples);
    out.ol_a = a.max_on_grid(samples);
    if (!(out.ul_a > 0.0))
        throw UsageError("diffusion coefficient must be positive (grid scan found min " +
                         format_full(out.ul_a) + ")");
    out.a = std::move(a);
    out.b = std::move(b);
    out.c = std::move(c);
    return out;
}

int CoefficientField::max_mode() const {
    return std::max({a.max_mode(), b.max_mode(), c.max_mode()});
}

CoefficientField CoefficientField::translated(double offset) const {
    CoefficientField out = *this;
    out.a = a.translated(offset);
    out.b = b.translated(offset);
    out.c = c.translated(offset);
    return out;
}

CoefficientField CoefficientField::shifted_c(double gamma) const {
    CoefficientField out = *this;
    out.c.add_constant(gamma);
    return out;
}

// ---- 1D discretization ----

void DiscreteOperator::apply(const std::vector<double>& u, std::vector<double>& out) const {
    const int n = static_cast<int>(size());
    out.resize(size());
    for (int i = 0; i < n; ++i) {
        const int im = (i == 0) ? n - 1 : i - 1;
        const int ip = (i == n - 1) ? 0 : i + 1;
        out[i] = sub[i] * u[im] + diag[i] * u[i] + sup[i] * u[ip];
    }
}

double DiscreteOperator::max_c() const {
    if (c_values.empty()) throw UsageError("operator has no nodes");
    return *std::max_element(c_values.begin(), c_values.end());
}

StencilRow stencil_row(const CoefficientField& coeffs, double x, double h, Scheme scheme,
                       bool& peclet) {
    const double av = coeffs.a(x);
    if (!(av > 0.0))
        throw NumericalFailure("diffusion coefficient not positive at grid node " +
                               format_full(x));
    const double bv = coeffs.b(x);
    const double cv = coeffs.c(x);

    StencilRow row;
    row.sub = av / (h * h);
    row.sup = av / (h * h);
    row.diag = -2.0 * av / (h * h);
    if (scheme == Scheme::upwind) {
        // First-order upwind keeps both off-diagonals nonnegative.
        if (bv >= 0.0) {
            row.sup += bv / h;
            row.diag -= bv / h;
        } else {
            row.sub += -bv / h;
            row.diag += bv / h;
        }
    } else {
        row.sub -= bv / (2.0 * h);
        row.sup += bv / (2.0 * h);
        if (std::abs(bv) * h >= 2.0 * av) peclet = true;
    }
    row.diag += cv;
    row.c = cv;
    return row;
}

DiscreteOperator discretize(const CoefficientField& coeffs, const TorusGrid& grid,
                            Scheme scheme) {
    check_period_match(grid.period, coeffs.period, "discretize");
    const int need = 4 * std::max(1, coeffs.max_mode());
    if (grid.n < need)
        throw UsageError("grid too coarse for the coefficients: need at least " +
                         std::to_string(need) + " nodes (4 per highest mode)");

    DiscreteOperator op{grid, scheme, false, {}, {}, {}, {}};
    const std::size_t n = static_cast<std::size_t>(grid.n);
    op.sub.resize(n);
    op.diag.resize(n);
    op.sup.resize(n);
    op.c_values.resize(n);
    const double h = grid.h();

    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.node(static_cast<int>(i));
        const StencilRow row = stencil_row(coeffs, x, h, scheme, op.peclet_warning);
        op.sub[i] = row.sub;
        op.sup[i] = row.sup;
        op.diag[i] = row.diag;
        op.c_values[i] = row.c;
    }
    return op;
}

// ---- 1D eigensolver ----

EigenPair principal_eigenpair(const DiscreteOperator& op, double tol, int max_iter) {
    const std::size_t n = op.size();
    if (n == 0) throw UsageError("cannot take the eigenpair of an empty operator");

    double max_abs_diag = 0.0;
    for (double d : op.diag) max_abs_diag = std::max(max_abs_diag, std::abs(d));
    const double s = std::max(max_abs_diag, op.max_c()) + 1.0;

    std::vector<double> msub(n), mdiag(n), msup(n);
    for (std::size_t i = 0; i < n; ++i) {
        msub[i] = -op.sub[i];
        mdiag[i] = s - op.diag[i];
        msup[i] = -op.sup[i];
    }

    auto solve_m = [&](const std::vector<double>& rhs) {
        return solve_cyclic_tridiagonal(msub, mdiag, msup, rhs);
    };
    auto apply_minus_a = [&](const std::vector<double>& u, std::vector<double>& out) {
        op.apply(u, out);
        for (double& v : out) v = -v;
    };
    return inverse_iterate(n, s, solve_m, apply_minus_a, tol, max_iter);
}

ShiftCheckReport shift_invariance_check(const CoefficientField& coeffs, double gamma,
                                        const TorusGrid& grid, double tol) {
    if (!(tol > 0.0)) throw UsageError("shift check tolerance must be positive");
    ShiftCheckReport out;
    out.gamma = gamma;

    // Solve each eigenvalue tighter than the identity tolerance so the two
    // bracket midpoints cannot eat the whole budget.
    const double eig_tol = std::max(tol / 4.0, 1e-14);
    const int max_iter = 4000000;

    const DiscreteOperator base_op = discretize(coeffs, grid);
    const DiscreteOperator shifted_op = discretize(coeffs.shifted_c(gamma), grid);
    const EigenPair base = principal_eigenpair(base_op, eig_tol, max_iter);
    const EigenPair shifted = principal_eigenpair(shifted_op, eig_tol, max_iter);

    out.lambda_base = base.lambda_p;
    out.lambda_shifted = shifted.lambda_p;
    out.identity_error = std::abs(shifted.lambda_p - (base.lambda_p - gamma));
    out.report.claim_id = "diagonal shift moves the principal eigenvalue by exactly -gamma";
    out.report.record(gamma, tol, out.identity_error);

    bool nonpositive = true;
    bool nonzero = false;
    for (double cv : base_op.c_values) {
        if (cv > 0.0) nonpositive = false;
        if (cv != 0.0) nonzero = true;
    }
    out.c_nonpositive = nonpositive;
    out.c_not_identically_zero = nonzero;
    if (nonpositive && nonzero) {
        // Strict sign claim: the rigorous lower end of the bracket must clear 0.
        out.positivity_margin = base.lambda_p - 0.5 * base.bracket_width;
        out.report.record(0.0, out.positivity_margin,
                          std::numeric_limits<double>::denorm_min());
    }
    return out;
}

std::vector<RefinementRow> refinement_study(const CoefficientField& coeffs,
                                            const std::vector<int>& sizes, double tol,
                                            Scheme scheme) {
    if (sizes.size() < 2) throw UsageError("refinement study needs at least two grid sizes");
    for (std::size_t k = 1; k < sizes.size(); ++k)
        if (sizes[k] <= sizes[k - 1])
            throw UsageError("refinement sizes must be strictly increasing");

    std::vector<RefinementRow> rows;
    const int max_iter = 8000000;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        TorusGrid grid(sizes[k], coeffs.period);
        const EigenPair e =
            principal_eigenpair(discretize(coeffs, grid, scheme), tol, max_iter);
        RefinementRow row;
        row.n = sizes[k];
        row.lambda = e.lambda_p;
        if (k >= 1) row.diff_prev = std::abs(row.lambda - rows[k - 1].lambda);
        if (k >= 2 && row.diff_prev > 0.0 && rows[k - 1].diff_prev > 0.0)
            row.observed_order = std::log(rows[k - 1].diff_prev / row.diff_prev) /
                                 std::log(static_cast<double>(sizes[k]) /
                                          static_cast<double>(sizes[k - 1]));
        rows.push_back(row);
    }
    return rows;
}

// ---- 2D fields ----

double SeparableField2D::operator()(double x, double y) const {
    double v = a0;
    const double wx = 2.0 * std::numbers::pi / period_x;
    const double wy = 2.0 * std::numbers::pi / period_y;
    for (const Term& t : terms) {
        const double fx = t.sin_x ? std::sin(t.kx * wx * x) : std::cos(t.kx * wx * x);
        const double fy = t.sin_y ? std::sin(t.ky * wy * y) : std::cos(t.ky * wy * y);
        v += t.amp * fx * fy;
    }
    return v;
}

int SeparableField2D::max_mode() const {
    int m = 0;
    for (const Term& t : terms) m = std::max({m, t.kx, t.ky});
    return m;
}

SeparableField2D SeparableField2D::constant(double v) {
    SeparableField2D f;
    f.a0 = v;
    return f;
}

CoefficientField2D CoefficientField2D::make(SeparableField2D a, SeparableField2D bx,
                                            SeparableField2D by, SeparableField2D c) {
    CoefficientField2D out;
    out.period_x = a.period_x;
    out.period_y = a.period_y;
    if (!(out.period_x > 0.0) || !(out.period_y > 0.0))
        throw UsageError("coefficient periods must be positive");
    for (const SeparableField2D* f : {&bx, &by, &c}) {
        check_period_match(f->period_x, out.period_x, "2D coefficient");
        check_period_match(f->period_y, out.period_y, "2D coefficient");
    }

    const int samples = std::max(256, 16 * (a.max_mode() + 1));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j)
        for (int i = 0; i < samples; ++i) {
            const double v = a(out.period_x * i / samples, out.period_y * j / samples);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(lo > 0.0))
        throw UsageError("2D diffusion coefficient must be positive (grid scan found min " +
                         format_full(lo) + ")");
    out.ul_a = lo;
    out.ol_a = hi;
    out.a = std::move(a);
    out.bx = std::move(bx);
    out.by = std::move(by);
    out.c = std::move(c);
    return out;
}

// ---- 2D discretization ----

void DiscreteOperator2D::apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(size());
    const int nx = grid.gx.n;
    const int ny = grid.gy.n;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t idx = grid.index(i, j);
            out[idx] = center[idx] * u[idx] + west[idx] * u[grid.index(i - 1, j)] +
                       east[idx] * u[grid.index(i + 1, j)] +
                       south[idx] * u[grid.index(i, j - 1)] +
                       north[idx] * u[grid.index(i, j + 1)];
        }
}

double DiscreteOperator2D::max_c() const {
    if (c_values.empty()) throw UsageError("operator has no nodes");
    return *std::max_element(c_values.begin(), c_values.end());
}

std::vector<double> DiscreteOperator2D::dense() const {
    const std::size_t n = size();
    if (n > kDenseCap)
        throw UsageError("2D dense matrix capped at " + std::to_string(kDenseCap) +
                         " unknowns");
    std::vector<double> m(n * n, 0.0);
    const int nx = grid.gx.n;
    const int ny = grid.gy.n;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t row = grid.index(i, j);
            m[row * n + row] += center[row];
            m[row * n + grid.index(i - 1, j)] += west[row];
            m[row * n + grid.index(i + 1, j)] += east[row];
            m[row * n + grid.index(i, j - 1)] += south[row];
            m[row * n + grid.index(i, j + 1)] += north[row];
        }
    return m;
}

DiscreteOperator2D discretize_2d(const CoefficientField2D& coeffs, const TorusGrid2D& grid,
                                 Scheme scheme) {
    check_period_match(grid.gx.period, coeffs.period_x, "discretize_2d (x)");
    check_period_match(grid.gy.period, coeffs.period_y, "discretize_2d (y)");
    const int need_x = 4 * std::max({1, per_axis_max_mode(coeffs.a, true),
                                     per_axis_max_mode(coeffs.bx, true),
                                     per_axis_max_mode(coeffs.by, true),
                                     per_axis_max_mode(coeffs.c, true)});
    const int need_y = 4 * std::max({1, per_axis_max_mode(coeffs.a, false),
                                     per_axis_max_mode(coeffs.bx, false),
                                     per_axis_max_mode(coeffs.by, false),
                                     per_axis_max_mode(coeffs.c, false)});
    if (grid.gx.n < need_x || grid.gy.n < need_y)
        throw UsageError("2D grid too coarse for the coefficients");

    DiscreteOperator2D op{grid, scheme, false, {}, {}, {}, {}, {}, {}};
    const std::size_t n = grid.size();
    op.center.resize(n);
    op.west.resize(n);
    op.east.resize(n);
    op.south.resize(n);
    op.north.resize(n);
    op.c_values.resize(n);
    const double hx = grid.gx.h();
    const double hy = grid.gy.h();

    for (int j = 0; j < grid.gy.n; ++j)
        for (int i = 0; i < grid.gx.n; ++i) {
            const std::size_t idx = grid.index(i, j);
            const double x = grid.gx.node(i);
            const double y = grid.gy.node(j);
            const double av = coeffs.a(x, y);
            if (!(av > 0.0))
                throw NumericalFailure("2D diffusion coefficient not positive at a node");
            const double bxv = coeffs.bx(x, y);
            const double byv = coeffs.by(x, y);
            const double cv = coeffs.c(x, y);

            double w = av / (hx * hx), e = av / (hx * hx);
            double so = av / (hy * hy), no = av / (hy * hy);
            double mid = -2.0 * av / (hx * hx) - 2.0 * av / (hy * hy);
            if (scheme == Scheme::upwind) {
                if (bxv >= 0.0) {
                    e += bxv / hx;
                    mid -= bxv / hx;
                } else {
                    w += -bxv / hx;
                    mid += bxv / hx;
                }
                if (byv >= 0.0) {
                    no += byv / hy;
                    mid -= byv / hy;
                } else {
                    so += -byv / hy;
                    mid += byv / hy;
                }
            } else {
                w -= bxv / (2.0 * hx);
                e += bxv / (2.0 * hx);
                so -= byv / (2.0 * hy);
                no += byv / (2.0 * hy);
                if (std::abs(bxv) * hx >= 2.0 * av || std::abs(byv) * hy >= 2.0 * av)
                    op.peclet_warning = true;
            }
            op.west[idx] = w;
            op.east[idx] = e;
            op.south[idx] = so;
            op.north[idx] = no;
            op.center[idx] = mid + cv;
            op.c_values[idx] = cv;
        }
    return op;
}

EigenPair principal_eigenpair_2d(const DiscreteOperator2D& op, double tol, int max_iter) {
    const std::size_t n = op.size();
    if (n == 0) throw UsageError("cannot take the eigenpair of an empty operator");

    double max_abs_diag = 0.0;
    for (double d : op.center) max_abs_diag = std::max(max_abs_diag, std::abs(d));
    const double s = std::max(max_abs_diag, op.max_c()) + 1.0;

    std::vector<double> m = op.dense();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const double a_rc = m[r * n + c];
            m[r * n + c] = (r == c ? s : 0.0) - a_rc;
        }
    const DenseLU lu(std::move(m), n);
    if (lu.singular())
        throw NumericalFailure("shifted 2D operator is numerically singular");

    auto solve_m = [&](const std::vector<double>& rhs) { return lu.solve(rhs); };
    auto apply_minus_a = [&](const std::vector<double>& u, std::vector<double>& out) {
        op.apply(u, out);
        for (double& v : out) v = -v;
    };
    return inverse_iterate(n, s, solve_m, apply_minus_a, tol, max_iter);
}

}  // namespace liouville
