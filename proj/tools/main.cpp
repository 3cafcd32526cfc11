#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return pvortex::cli::main(argc, argv, std::cerr); }
