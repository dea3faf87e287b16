#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffmu::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `ffmu` invocation. `args` excludes the program name. Results go
/// to `out` (or the --out file), diagnostics and progress to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffmu::cli
