#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixloci::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (args[0] is the program name). Exit codes: 0 when an
/// analysis completed with any verdict, 2 on malformed input or usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mixloci::cli
