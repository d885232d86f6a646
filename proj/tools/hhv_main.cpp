#include <iostream>

#include "hhv/cli.hpp"

int main(int argc, char** argv) { return hhv::cli::run(argc, argv, std::cout, std::cerr); }
