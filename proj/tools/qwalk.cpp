#include "qwalk/cli/commands.hpp"

int main(int argc, char** argv) { return qw::cli::run_cli(argc, argv); }
