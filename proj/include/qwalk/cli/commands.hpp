#pragma once
#include <string>
#include <vector>

namespace qw::cli {
// Entry point shared by the executable and the tests; returns the exit code.
int run_cli(int argc, char** argv);
}  // namespace qw::cli
