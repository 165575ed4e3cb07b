#include <iostream>

#include "sidak/cli/commands.hpp"

int main(int argc, char** argv) { return sidak::cli::run(argc, argv, std::cout, std::cerr); }
