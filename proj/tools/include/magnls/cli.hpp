#pragma once

#include <string>
#include <vector>

namespace magnls::cli {

/// Parses argv, runs one subcommand and writes its artifacts.
/// Returns 0 on success, 1 on a validation or usage error, 2 on a numerical failure.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace magnls::cli
