#include <iostream>

#include "zolab/cli.hpp"

int main(int argc, char** argv) { return zolab::cli::run_cli(argc, argv, std::cout, std::cerr); }
