#pragma once

// Uniform periodic grids and nodal functions.

#include <cstddef>
#include <vector>

#include "liouville/rational.hpp"

namespace liouville {

struct TorusGrid {
    int n = 0;
    double period = 1.0;

    TorusGrid(int n_, double period_) : n(n_), period(period_) {
        if (n < 4) throw UsageError("torus grid needs at least 4 points");
        if (period <= 0.0) throw UsageError("torus period must be positive");
    }

    double h() const { return period / static_cast<double>(n); }
    double node(int i) const { return h() * static_cast<double>(i); }
    int wrap(int i) const { return ((i % n) + n) % n; }
};

struct TorusGrid2D {
    TorusGrid gx;
    TorusGrid gy;

    TorusGrid2D(TorusGrid x, TorusGrid y) : gx(x), gy(y) {}
    std::size_t size() const {
        return static_cast<std::size_t>(gx.n) * static_cast<std::size_t>(gy.n);
    }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(gy.wrap(j)) * static_cast<std::size_t>(gx.n) +
               static_cast<std::size_t>(gx.wrap(i));
    }
};

double sup_norm(const std::vector<double>& v);
double mean_value(const std::vector<double>& v);

}  // namespace liouville
