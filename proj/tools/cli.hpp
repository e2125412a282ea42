#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sfcscan::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Runs one command. `args` excludes the program name. Results go to `out`
/// (or to the --out file), diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfcscan::cli
