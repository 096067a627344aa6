#include <iostream>

#include "qprism/cli.hpp"

int main(int argc, char** argv) { return qprism::cli::run_command(argc, argv, std::cout, std::cerr); }
