#include <iostream>

#include "pslr/cli.hpp"

int main(int argc, char** argv) { return pslr::cli::run(argc, argv, std::cout, std::cerr); }
