#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. `args` excludes the program name. Results go to
/// `out` (or to files named by flags), diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pap::cli
