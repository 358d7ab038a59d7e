#pragma once

#include <string>
#include <vector>

namespace msa {

// Full command-line entry point (args exclude the program name).
// Exit codes: 0 success, 1 invalid configuration, 2 numerical failure,
// 3 I/O failure.
int run_cli(std::vector<std::string> args);

}  // namespace msa
