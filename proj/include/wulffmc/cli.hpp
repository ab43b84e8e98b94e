#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wulffmc {

inline constexpr const char* kVersion = "0.1.0";

// When set, relative run.output paths land under this directory.
inline constexpr const char* kOutputRootEnv = "WULFFMC_OUTPUT_ROOT";

// Entry point behind main(): parses argv (args[0] is the program name),
// dispatches the subcommand, maps exceptions to exit codes. 0 = success
// (an INDISTINGUISHABLE verdict is success), 2 = usage or config error,
// 3 = runtime or equilibration error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wulffmc
