#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rcpomdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the command-line tool. args excludes the program name.
/// Reads RCPOMDP_BUDGET and RCPOMDP_SEED as defaults that flags override.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcpomdp
