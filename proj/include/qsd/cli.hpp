#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUsage = 64;

/// Runs one CLI invocation. `args` excludes the program name. Reports go to
/// `out` unless --output names a file; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsd::cli
