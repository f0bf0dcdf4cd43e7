#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lancaster/experiments.hpp"

namespace lancaster {

// Shortest decimal form that parses back to the same double (at most 17
// significant digits). "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
std::string format_fixed(double v, int decimals);
double parse_double(std::string_view text);  // ParseError

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no = 0);
std::string csv_field(std::string_view text);

// CSV: a "# key=value,..." metadata line, then a header and one row per cell.
void write_report_csv(std::ostream& out, const StudyReport& report);
StudyReport read_report_csv(std::istream& in);
void write_report_csv(const std::string& path, const StudyReport& report);
StudyReport read_report_csv(const std::string& path);

std::string report_to_json(const StudyReport& report, int indent = 2);
StudyReport report_from_json(std::string_view text);

// Human-readable pivot: one row per distribution, one column per method,
// three decimals, "-" for unavailable cells.
std::string format_report_table(const StudyReport& report, bool with_lengths = false);

// Row-level helpers used for resumable partial files.
std::string cell_csv_header();
std::string cell_to_csv(const StudyCell& cell);
StudyCell cell_from_csv(const std::vector<std::string>& fields, std::size_t line_no);

}  // namespace lancaster
