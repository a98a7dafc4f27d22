#pragma once

#include <string>
#include <vector>

namespace tangle {

// Command-line front end. Arguments exclude the program name. Exit codes:
// 0 success, 1 usage error, 2 runtime failure.
int cli_main(const std::vector<std::string>& args);

}  // namespace tangle
