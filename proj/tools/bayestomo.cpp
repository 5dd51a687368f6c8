#include <iostream>

#include "bayestomo/cli.hpp"

int main(int argc, char** argv) { return bayestomo::cli::run(argc, argv, std::cout, std::cerr); }
