#include <iostream>

#include "kdsp/cli.hpp"

int main(int argc, char** argv) { return kdsp::run_cli(argc, argv, std::cout, std::cerr); }
