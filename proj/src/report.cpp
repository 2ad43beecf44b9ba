#include "liouville/report.hpp"

#include <cstdio>
#include <fstream>

#include "liouville/rational.hpp"

namespace liouville {

std::string format_full(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open CSV output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out) throw UsageError("failed writing CSV output file: " + path);
}

std::string summary_line(const InequalityReport& report) {
    std::string line = report.passed() ? "[PASS] " : "[FAIL] ";
    line += report.claim_id;
    line += ": points=" + std::to_string(report.points_checked);
    line += " violations=" + std::to_string(report.violation_count);
    line += " worst_margin=" + format_full(report.worst_margin);
    line += " at=" + format_full(report.worst_point);
    return line;
}

}  // namespace liouville
