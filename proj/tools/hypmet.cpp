#include <iostream>

#include "hypmet/cli.hpp"

int main(int argc, char** argv) { return hypmet::run_cli(argc, argv, std::cout, std::cerr); }
