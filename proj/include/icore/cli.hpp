#ifndef ICORE_CLI_HPP
#define ICORE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace icore::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kUnbounded = 3;

// `args` excludes the program name. Reports go to `out` unless --out names a
// file; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace icore::cli

#endif  // ICORE_CLI_HPP
