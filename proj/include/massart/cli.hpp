#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace massart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;

/// Entry point of massart-forge. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace massart::cli
