#pragma once

// Shared result-reporting types: inequality check reports, CSV formatting
// helpers. Every verification routine returns one of these so the CLI and
// the test suites consume a single shape.

#include <limits>
#include <string>
#include <vector>

namespace liouville {

struct Violation {
    double point = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

// Outcome of checking a family of pointwise inequalities lhs(x) >= rhs(x).
// worst_margin is the minimum of lhs - rhs over all checked points, so the
// report passes exactly when worst_margin >= 0.
struct InequalityReport {
    std::string claim_id;
    long points_checked = 0;
    long violation_count = 0;
    std::vector<Violation> violations;  // first kMaxStoredViolations only
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_point = 0.0;

    static constexpr std::size_t kMaxStoredViolations = 64;

    bool passed() const { return violation_count == 0; }

    // Record one checked point of the claim lhs >= rhs.
    void record(double point, double lhs, double rhs) {
        ++points_checked;
        const double margin = lhs - rhs;
        if (margin < worst_margin) {
            worst_margin = margin;
            worst_point = point;
        }
        if (margin < 0.0) {
            ++violation_count;
            if (violations.size() < kMaxStoredViolations)
                violations.push_back({point, lhs, rhs});
        }
    }

    void merge(const InequalityReport& other) {
        points_checked += other.points_checked;
        violation_count += other.violation_count;
        for (const auto& v : other.violations)
            if (violations.size() < kMaxStoredViolations) violations.push_back(v);
        if (other.worst_margin < worst_margin) {
            worst_margin = other.worst_margin;
            worst_point = other.worst_point;
        }
    }
};

// Formats a double with 17 significant digits (round-trip exact).
std::string format_full(double value);

// Writes a CSV file: header row then data rows, comma separated.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// One summary line of the form "[PASS] <claim>: ..." / "[FAIL] ...".
std::string summary_line(const InequalityReport& report);

}  // namespace liouville
