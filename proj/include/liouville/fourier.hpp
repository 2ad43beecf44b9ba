#pragma once

// Truncated Fourier series: the coefficient format for periodic operators
// and forcings. Coefficients enter from config files as exact decimal
// strings; evaluation is plain double arithmetic.

#include <string>
#include <vector>

namespace liouville {

struct FourierMode {
    int k = 0;  // mode number >= 1
    double cos_amp = 0.0;
    double sin_amp = 0.0;
};

class FourierSeries {
  public:
    FourierSeries() = default;
    explicit FourierSeries(double period) : period_(period) {}

    static FourierSeries constant(double c, double period = 1.0);

    double period() const { return period_; }
    double mean() const { return a0_; }

    void add_constant(double c) { a0_ += c; }
    void add_cos(int k, double amp);
    void add_sin(int k, double amp);

    double operator()(double x) const;

    const std::vector<FourierMode>& modes() const { return modes_; }

    // Same function translated: g(x) = f(x + offset).
    FourierSeries translated(double offset) const;

    int max_mode() const;
    bool is_zero() const;

    // Rigorous sup bound: |a0| + sum_k (|cos_amp| + |sin_amp|).
    double amplitude_bound() const;

    // Extrema scan over a uniform grid with `samples` points per period.
    double min_on_grid(int samples) const;
    double max_on_grid(int samples) const;

    // Term syntax used by configs: "const:<amp>", "cos:<k>:<amp>",
    // "sin:<k>:<amp>"; amplitudes are decimal strings parsed exactly and
    // then rounded once to double.
    static FourierSeries parse_terms(const std::vector<std::string>& terms,
                                     double period);
    std::vector<std::string> serialize_terms() const;

  private:
    double period_ = 1.0;
    double a0_ = 0.0;
    std::vector<FourierMode> modes_;
};

}  // namespace liouville
