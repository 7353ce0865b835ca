#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tanglekit::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

/// Parses a real expression such as "0.25", "pi/2", "-3*pi/4" or "1e-3".
double parse_real(std::string_view text);

struct Range {
  double start;
  double stop;
  double step;
};

/// "start:stop:step" with a nonzero step whose sign matches stop - start.
/// A range with start == stop holds a single point.
Range parse_range(std::string_view text);
std::vector<double> expand_range(const Range& range);

/// Runs the command line; never throws. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tanglekit::cli
