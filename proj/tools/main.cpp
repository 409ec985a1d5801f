#include <iostream>

#include "confdim/cli.hpp"

int main(int argc, char** argv) { return confdim::cli::run(argc, argv, std::cout, std::cerr); }
