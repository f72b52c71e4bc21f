#include "eop/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return eop::cli::run(argc, argv, std::cout, std::cerr); }
