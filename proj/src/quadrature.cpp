#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "liouville/rational.hpp"

namespace liouville {

GaussLegendre::GaussLegendre(int order) {
    nodes_.resize(order);
    weights_.resize(order);
    const int n = order;
    for (int k = 0; k < (n + 1) / 2; ++k) {
        // Chebyshev-like initial guess for the k-th root, then Newton on P_n.
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[k] = -x;  // roots found from the positive end inward
        weights_[k] = w;
        nodes_[n - 1 - k] = x;
        weights_[n - 1 - k] = w;
    }
}

const GaussLegendre& GaussLegendre::of_order(int order) {
    if (order < 2 || order > 128) throw UsageError("quadrature order out of range");
    static std::map<int, GaussLegendre> cache;
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
    return it->second;
}

double GaussLegendre::apply(const std::function<double(double)>& f, double a,
                            double b) const {
    const double mid = 0.5 * (a + b);
    const double halflen = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        sum += weights_[i] * f(mid + halflen * nodes_[i]);
    return halflen * sum;
}

namespace {

void integrate_recursive(const std::function<double(double)>& f,
                         const GaussLegendre& rule, double a, double b,
                         double tol, int depth, QuadratureResult& out) {
    const double whole = rule.apply(f, a, b);
    const double mid = 0.5 * (a + b);
    const double left = rule.apply(f, a, mid);
    const double right = rule.apply(f, mid, b);
    out.evaluations += 3L * rule.order();
    const double refined = left + right;
    const double disc = std::abs(whole - refined);
    if (disc <= tol || depth <= 0 || (b - a) < 1e-14 * (1.0 + std::abs(a))) {
        out.value += refined;
        out.error_estimate += disc;
        return;
    }
    integrate_recursive(f, rule, a, mid, 0.5 * tol, depth - 1, out);
    integrate_recursive(f, rule, mid, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol,
                                    int order, int max_depth) {
    QuadratureResult out;
    if (a == b) return out;
    if (abs_tol <= 0.0) throw UsageError("quadrature tolerance must be positive");
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    integrate_recursive(f, GaussLegendre::of_order(order), a, b, abs_tol,
                        max_depth, out);
    out.value *= sign;
    return out;
}

QuadratureResult integrate_with_breakpoints(const std::function<double(double)>& f,
                                            double a, double b,
                                            std::vector<double> breakpoints,
                                            double abs_tol, int order) {
    QuadratureResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b && c > cuts.back()) cuts.push_back(c);
    cuts.push_back(b);
    const double tol_per_unit = abs_tol / (b - a);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        out += integrate_adaptive(f, cuts[i], cuts[i + 1],
                                  tol_per_unit * (cuts[i + 1] - cuts[i]), order);
    out.value *= sign;
    return out;
}

std::vector<double> half_integer_breakpoints(double a, double b) {
    std::vector<double> cuts;
    if (a > b) std::swap(a, b);
    long first = static_cast<long>(std::floor(2.0 * a)) + 1;
    long last = static_cast<long>(std::ceil(2.0 * b)) - 1;
    for (long j = first; j <= last; ++j) {
        double c = 0.5 * j;
        if (c > a && c < b) cuts.push_back(c);
    }
    return cuts;
}

}  // namespace liouville
