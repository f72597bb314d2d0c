#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace puckpar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

// Runs one `puckpar` invocation. args[0] is the program name. Messages go to
// `out` and `err`; result files go to the --out directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace puckpar::cli
