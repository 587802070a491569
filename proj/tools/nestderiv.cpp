#include <iostream>

#include "nestderiv/cli.hpp"

int main(int argc, char** argv) { return nestderiv::cli::main_entry(argc, argv, std::cout, std::cerr); }
