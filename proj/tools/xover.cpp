#include <iostream>

#include "xover/cli.hpp"

int main(int argc, char** argv) { return xover::cli::run(argc, argv, std::cout, std::cerr); }
