#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace commons::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command line (args excludes the program name). Reports go to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV with a header `x,<label>,...` and 17 significant digits.
std::string format_csv(const std::vector<double>& xs, const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& columns);

}  // namespace commons::cli
