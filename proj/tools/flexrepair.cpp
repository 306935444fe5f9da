#include <iostream>

#include "flexrepair/cli.hpp"

int main(int argc, char** argv) { return flexrepair::run_cli(argc, argv, std::cout, std::cerr); }
