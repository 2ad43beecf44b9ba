#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "liouville/counterexample.hpp"
#include "liouville/rational.hpp"
#include "liouville/sigma.hpp"

using namespace liouville;

namespace {

// Composite Simpson oracle, deliberately naive: fixed uniform panels, no
// shared code with the adaptive quadrature under test. The integrand is
// C^1 with curvature jumps on the half-integer lattice, so panels are
// aligned to half-integers by choosing counts divisible by the interval.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("closed-form running integral matches the exact table") {
    U2Evaluator ev;
    PrefixTable pre(4);
    for (long num = -640; num <= 640; ++num) {
        const double y = num / 8.0;
        const double exact = to_double(pre.B_at(rational_from_double(y)));
        CHECK(ev.B(y) == doctest::Approx(exact).epsilon(1e-14));
    }
    CHECK(ev.B(0.0) == 0.0);
    CHECK(ev.B(1.0) == doctest::Approx(0.5));
    CHECK(ev.B(-1.0) == ev.B(1.0));
}

TEST_CASE("integrand stays in (0, 1]") {
    U2Evaluator ev;
    for (long num = 0; num <= 200; ++num) {
        const double y = num / 4.0;
        const double g = ev.integrand(y);
        CHECK(g > 0.0);
        CHECK(g <= 1.0);  // running integral is nonnegative
    }
}

TEST_CASE("solution values against closed forms on the first cell") {
    U2Evaluator ev;
    // On [0, 1/2] the exponent is exactly y^2, so
    // u2(1/2) = int_0^{1/2} e^{-y^2} dy = sqrt(pi)/2 * erf(1/2).
    const double ref_half = std::sqrt(std::numbers::pi) / 2.0 * std::erf(0.5);
    CHECK(ev.value_at(0.5, 1e-11).value == doctest::Approx(ref_half).epsilon(1e-10));
    // Crude but rigorous bracket on [0, 1]: 0 <= B <= 1/2 there.
    const double u2_one = ev.value_at(1.0, 1e-11).value;
    CHECK(u2_one >= std::exp(-0.5));
    CHECK(u2_one <= 1.0);
}

TEST_CASE("solution values match a fixed-panel Simpson oracle") {
    U2Evaluator ev;
    PrefixTable pre(3);
    auto g = [&](double y) {
        return std::exp(-to_double(pre.B_at(rational_from_double(y))));
    };
    for (double x : {0.5, 1.0, 2.5, 3.0, 5.0, 9.25}) {
        const double panels = std::ceil(x * 256.0);
        const double ref = simpson(g, 0.0, x, static_cast<int>(panels) * 2);
        CHECK(ev.value_at(x, 1e-11).value == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("negative arguments mirror exactly; direct quadrature agrees") {
    U2Evaluator ev;
    for (double x : {0.75, 2.0, 6.5}) {
        const double plus = ev.value_at(x, 1e-10).value;
        const double minus = ev.value_at(-x, 1e-10).value;
        CHECK(minus == -plus);  // the shortcut is an exact reflection
        // the independent path must agree to quadrature accuracy
        const double direct = ev.integrate_exp_neg_B(-x, 0.0, 1e-11).value;
        CHECK(direct == doctest::Approx(plus).epsilon(1e-9));
    }
}

TEST_CASE("prefix cache grows to cover queries") {
    U2Evaluator ev;
    ev.value_at(10.6, 1e-9);
    // the prefix holds every whole cell below the query point
    CHECK(ev.covered() >= 10);
    ev.value_at(14.0, 1e-9);
    CHECK(ev.covered() >= 14);
}

TEST_CASE("window sup of the drift is exact and monotone in the window") {
    U2Evaluator ev;
    const double w3 = ev.window_sup_b(3.0);
    const double w81 = ev.window_sup_b(81.0);
    CHECK(w3 <= w81);
    // |b| <= |sigma| <= 1 + pi^2/6 everywhere
    CHECK(w81 < 1.0 + std::numbers::pi * std::numbers::pi / 6.0);
    // on [-3, 3] the extreme cell value is 2 (attained at a half-integer)
    CHECK(w3 == doctest::Approx(2.0));
}

TEST_CASE("integer-point lower bound for the prefix integral") {
    InequalityReport r = verify_intf(729);
    CHECK(r.passed());
    CHECK(r.points_checked == 729);
    CHECK(r.worst_margin >= 0.0);
}

TEST_CASE("per-level linear lower bound for the prefix integral") {
    for (unsigned n : {1u, 2u, 3u}) {
        InequalityReport r = verify_intn(n, 3);
        CHECK(r.passed());
        CHECK(r.points_checked > 0);
    }
}

TEST_CASE("approximation bound against the tail bracket") {
    for (unsigned n : {1u, 2u}) {
        InequalityReport r = verify_approximation(n, n + 2);
        CHECK(r.passed());
    }
    InequalityReport r = verify_approximation(3, 5);
    CHECK(r.passed());
}

TEST_CASE("upper bound is finite, stable in tol, and above swept values") {
    const double b_loose = u2_upper_bound(1e-6);
    const double b_tight = u2_upper_bound(1e-8);
    CHECK(std::isfinite(b_loose));
    CHECK(std::isfinite(b_tight));
    CHECK(b_loose > 1.0);
    CHECK(std::abs(b_loose - b_tight) < 1e-5);

    U2Evaluator ev;
    CHECK(ev.value_at(243.0, 1e-9).value < b_tight);
}

TEST_CASE("bound integrand decays monotonically past its hump") {
    CHECK(u2_bound_integrand(1.0) == doctest::Approx(1.0));
    double prev = u2_bound_integrand(2.0);
    for (double y = 3.0; y < 200.0; y += 1.0) {
        const double g = u2_bound_integrand(y);
        CHECK(g <= prev + 1e-15);
        prev = g;
    }
    // exponent at 3^8 is 6560/324, at 3^12 it is 531440/676
    CHECK(u2_bound_integrand(6561.0) < 1e-8);
    CHECK(u2_bound_integrand(531441.0) < 1e-30);
}

TEST_CASE("drift-integral lower bound report") {
    BLowerBoundReport r =
        verify_b_integral_lower_bound({1, 2, 3, 9, 27, 81, 243, 729});
    CHECK(r.passed());
    CHECK(r.global_norm.points_checked == 8);
    CHECK(r.window_sup.points_checked == 8);
    // the window-sup variant is the sharper claim
    CHECK(r.window_sup.worst_margin <= r.global_norm.worst_margin + 1e-12);
}

TEST_CASE("sweep: strictly increasing, odd, below the bound") {
    SweepResult r = u2_boundedness_sweep(27.0, 0.25, 1e-9, 10);
    CHECK(r.report.passed());
    CHECK(r.samples.size() == 109);
    CHECK(r.max_u2 > 0.0);
    CHECK(r.max_u2 <= r.upper_bound);
    for (std::size_t i = 1; i < r.samples.size(); ++i)
        CHECK(r.samples[i].u2 > r.samples[i - 1].u2);
}

TEST_CASE("growth increments of the solution eventually shrink") {
    // Increments u2(3^{k+1}) - u2(3^k) grow while exp(-B) still carries
    // mass (the prefix lower bound m / (2 (log_3 m + 1)^2) only overtakes
    // the norm of b around m ~ 3^5), peak at k = 5, then collapse; their
    // telescoped total stays below the explicit bound.
    U2Evaluator ev;
    std::vector<double> inc;
    for (unsigned k = 0; k + 1 <= 8; ++k) {
        const double lo = ev.value_at(std::pow(3.0, k), 1e-10).value;
        const double hi = ev.value_at(std::pow(3.0, k + 1), 1e-10).value;
        inc.push_back(hi - lo);
        CHECK(inc.back() > 0.0);  // strict monotonicity of u2
    }
    for (std::size_t k = 5; k + 1 < inc.size(); ++k) CHECK(inc[k + 1] < inc[k]);
    // past the peak the collapse is super-geometric
    CHECK(inc[6] < 0.5 * inc[5]);
    CHECK(inc[7] < 0.1 * inc[6]);
    CHECK(inc[8] < 0.01 * inc[7]);
    // the increments telescope to u2(3^8) - u2(1), below the bound
    CHECK(ev.value_at(6561.0, 1e-9).value < u2_upper_bound(1e-8));
}
