#include "twave/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return twave::run_cli(argc, argv, std::cout, std::cerr); }
