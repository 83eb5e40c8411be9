#include "itd/cli/commands.hpp"

#include <iostream>

int main(int argc, char **argv) { return itd::cli::run_cli(argc, argv, std::cerr); }
