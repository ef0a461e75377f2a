#include <iostream>

#include "qcs/cli.hpp"

int main(int argc, char** argv) { return qcs::cli::main(argc, argv, std::cout, std::cerr); }
