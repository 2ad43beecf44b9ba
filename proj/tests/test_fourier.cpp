#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "liouville/fourier.hpp"
#include "liouville/rational.hpp"

using namespace liouville;

TEST_CASE("constants and means") {
    FourierSeries f = FourierSeries::constant(2.5, 3.0);
    CHECK(f(0.0) == 2.5);
    CHECK(f(1.7) == 2.5);
    CHECK(f.mean() == 2.5);
    CHECK(f.period() == 3.0);
    CHECK(f.max_mode() == 0);
    CHECK(!f.is_zero());
    CHECK(FourierSeries::constant(0.0).is_zero());
}

TEST_CASE("modes evaluate against std::cos and merge by wavenumber") {
    FourierSeries f(1.0);
    f.add_constant(1.0);
    f.add_cos(1, 0.25);
    f.add_cos(1, 0.25);  // merges to 0.5
    f.add_sin(2, -0.125);
    CHECK(f.modes().size() == 2);
    const double w = 2.0 * std::numbers::pi;
    for (double x : {0.0, 0.21, 0.5, 0.77, 1.3, -2.4}) {
        const double ref = 1.0 + 0.5 * std::cos(w * x) - 0.125 * std::sin(2 * w * x);
        CHECK(f(x) == doctest::Approx(ref).epsilon(1e-15));
    }
    CHECK(f.max_mode() == 2);
    CHECK(f.amplitude_bound() >= 1.0 + 0.5 + 0.125 - 1e-15);
}

TEST_CASE("periodicity") {
    FourierSeries f(0.5);
    f.add_cos(1, 1.0);
    f.add_sin(3, 0.2);
    for (double x : {0.0, 0.1, 0.3}) CHECK(f(x) == doctest::Approx(f(x + 0.5)));
}

TEST_CASE("translation produces the pointwise-shifted series") {
    FourierSeries f(2.0);
    f.add_constant(0.3);
    f.add_cos(1, 1.0);
    f.add_sin(1, -0.5);
    f.add_sin(4, 0.25);
    for (double off : {0.0, 0.37, -1.22, 5.0}) {
        FourierSeries g = f.translated(off);
        for (double x : {0.0, 0.11, 0.5, 1.9, -0.6})
            CHECK(g(x) == doctest::Approx(f(x + off)).epsilon(1e-13));
    }
}

TEST_CASE("grid extrema bracket the true range") {
    FourierSeries f(1.0);
    f.add_constant(1.0);
    f.add_cos(1, -0.5);
    // true range [0.5, 1.5], attained at grid points of any multiple-of-4 grid
    CHECK(f.min_on_grid(64) == doctest::Approx(0.5));
    CHECK(f.max_on_grid(64) == doctest::Approx(1.5));
}

TEST_CASE("term strings parse and serialize back") {
    const std::vector<std::string> terms = {"const:1.5", "cos:1:-0.5", "sin:2:0.25"};
    FourierSeries f = FourierSeries::parse_terms(terms, 1.0);
    CHECK(f.mean() == 1.5);
    const double w = 2.0 * std::numbers::pi;
    CHECK(f(0.3) ==
          doctest::Approx(1.5 - 0.5 * std::cos(w * 0.3) + 0.25 * std::sin(2 * w * 0.3)));
    FourierSeries g = FourierSeries::parse_terms(f.serialize_terms(), 1.0);
    for (double x : {0.0, 0.2, 0.9}) CHECK(g(x) == doctest::Approx(f(x)));
}

TEST_CASE("empty term list is the zero series") {
    FourierSeries f = FourierSeries::parse_terms({}, 1.0);
    CHECK(f.is_zero());
    CHECK(f(0.37) == 0.0);
}

TEST_CASE("malformed terms are usage errors") {
    CHECK_THROWS_AS(FourierSeries::parse_terms({"cos:0:1"}, 1.0), UsageError);
    CHECK_THROWS_AS(FourierSeries::parse_terms({"tan:1:1"}, 1.0), UsageError);
    CHECK_THROWS_AS(FourierSeries::parse_terms({"const"}, 1.0), UsageError);
    CHECK_THROWS_AS(FourierSeries::parse_terms({"cos:1:abc"}, 1.0), UsageError);
}
