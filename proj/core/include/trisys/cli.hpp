#pragma once

#include <string>
#include <vector>

namespace trisys {

// CLI entry point (exposed as a function so tests can drive it in-process).
// Exit codes: 0 = success / all requested checks passed, 1 = a check failed,
// 2 = usage error.
int run_command(const std::vector<std::string>& argv);

}  // namespace trisys
