#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "lancaster/error.hpp"
#include "lancaster/sample.hpp"

namespace lancaster::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitDomain = 4;

class UsageError : public Error {
public:
    using Error::Error;
};

// Two numeric columns of a CSV file. A first row that is not entirely numeric
// is taken as the header. Selectors are column names (headered files) or
// 0-based indices; empty selectors mean columns 0 and 1.
Sample read_xy_csv(std::istream& in, std::string_view x_column, std::string_view y_column);
Sample read_xy_csv(const std::string& path, std::string_view x_column, std::string_view y_column);

void write_sample_csv(std::ostream& out, const Sample& sample);

// Entry point used by main(); returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lancaster::cli
