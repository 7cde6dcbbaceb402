#pragma once

#include <string>
#include <vector>

namespace twinscope::cli {

// Exit codes: 0 success, 1 usage error, 2 data/validation error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace twinscope::cli
