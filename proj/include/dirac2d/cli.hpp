#pragma once

#include <ostream>

namespace dirac2d::cli {

/// Exit codes: 0 ok, 2 configuration or usage error, 3 unclassified regime or no
/// table row, 4 window outside the decaying-exterior region, 5 numerical failure.
enum ExitCode : int { Ok = 0, ConfigError = 2, UnclassifiedRegime = 3, BadWindow = 4, NumericFailure = 5 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dirac2d::cli
