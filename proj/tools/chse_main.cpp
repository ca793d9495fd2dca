#include <iostream>

#include "chse/cli/run.hpp"

int main(int argc, char** argv) { return chse::cli::cli_main(argc, argv, std::cout, std::cerr); }
