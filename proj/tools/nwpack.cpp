#include <iostream>

#include "nwpack/cli.hpp"

int main(int argc, char** argv) { return nwpack::cli::run(argc, argv, std::cout, std::cerr); }
