#include "liouville/fourier.hpp"

#include <algorithm>
#include <cmath>

#include "liouville/rational.hpp"
#include "liouville/report.hpp"

namespace liouville {

FourierSeries FourierSeries::constant(double c, double period) {
    FourierSeries s(period);
    s.a0_ = c;
    return s;
}

void FourierSeries::add_cos(int k, double amp) {
    if (k < 1) throw UsageError("Fourier mode number must be >= 1");
    for (auto& m : modes_)
        if (m.k == k) {
            m.cos_amp += amp;
            return;
        }
    modes_.push_back({k, amp, 0.0});
}

void FourierSeries::add_sin(int k, double amp) {
    if (k < 1) throw UsageError("Fourier mode number must be >= 1");
    for (auto& m : modes_)
        if (m.k == k) {
            m.sin_amp += amp;
            return;
        }
    modes_.push_back({k, 0.0, amp});
}

double FourierSeries::operator()(double x) const {
    double value = a0_;
    const double w = 2.0 * M_PI / period_;
    for (const auto& m : modes_) {
        double arg = w * static_cast<double>(m.k) * x;
        value += m.cos_amp * std::cos(arg) + m.sin_amp * std::sin(arg);
    }
    return value;
}

FourierSeries FourierSeries::translated(double offset) const {
    FourierSeries out(period_);
    out.a0_ = a0_;
    const double w = 2.0 * std::numbers::pi / period_;
    for (const FourierMode& m : modes_) {
        const double theta = m.k * w * offset;
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        // f(x+offset): cos(kw(x+offset)) = cos(kwx)cos(theta) - sin(kwx)sin(theta),
        //              sin(kw(x+offset)) = sin(kwx)cos(theta) + cos(kwx)sin(theta).
        out.add_cos(m.k, m.cos_amp * ct + m.sin_amp * st);
        out.add_sin(m.k, m.sin_amp * ct - m.cos_amp * st);
    }
    return out;
}

int FourierSeries::max_mode() const {
    int k = 0;
    for (const auto& m : modes_) k = std::max(k, m.k);
    return k;
}

bool FourierSeries::is_zero() const {
    if (a0_ != 0.0) return false;
    for (const auto& m : modes_)
        if (m.cos_amp != 0.0 || m.sin_amp != 0.0) return false;
    return true;
}

double FourierSeries::amplitude_bound() const {
    double bound = std::abs(a0_);
    for (const auto& m : modes_) bound += std::abs(m.cos_amp) + std::abs(m.sin_amp);
    return bound;
}

double FourierSeries::min_on_grid(int samples) const {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
        lo = std::min(lo, (*this)(period_ * static_cast<double>(i) / samples));
    return lo;
}

double FourierSeries::max_on_grid(int samples) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i)
        hi = std::max(hi, (*this)(period_ * static_cast<double>(i) / samples));
    return hi;
}

FourierSeries FourierSeries::parse_terms(const std::vector<std::string>& terms,
                                         double period) {
    FourierSeries s(period);
    for (const std::string& term : terms) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t colon = term.find(':', start);
            if (colon == std::string::npos) {
                parts.push_back(term.substr(start));
                break;
            }
            parts.push_back(term.substr(start, colon - start));
            start = colon + 1;
        }
        if (parts.size() == 2 && parts[0] == "const") {
            s.add_constant(to_double(rational_from_decimal(parts[1])));
        } else if (parts.size() == 3 && (parts[0] == "cos" || parts[0] == "sin")) {
            int k = 0;
            try {
                k = std::stoi(parts[1]);
            } catch (...) {
                throw UsageError("bad Fourier mode number in term '" + term + "'");
            }
            double amp = to_double(rational_from_decimal(parts[2]));
            if (parts[0] == "cos")
                s.add_cos(k, amp);
            else
                s.add_sin(k, amp);
        } else {
            throw UsageError("bad Fourier term '" + term +
                             "' (want const:<amp>, cos:<k>:<amp> or sin:<k>:<amp>)");
        }
    }
    return s;
}

std::vector<std::string> FourierSeries::serialize_terms() const {
    std::vector<std::string> terms;
    if (a0_ != 0.0) terms.push_back("const:" + format_full(a0_));
    for (const auto& m : modes_) {
        if (m.cos_amp != 0.0)
            terms.push_back("cos:" + std::to_string(m.k) + ":" + format_full(m.cos_amp));
        if (m.sin_amp != 0.0)
            terms.push_back("sin:" + std::to_string(m.k) + ":" + format_full(m.sin_amp));
    }
    return terms;
}

}  // namespace liouville
