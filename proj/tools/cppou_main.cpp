#include <iostream>

#include "cppou/cli.hpp"

int main(int argc, char** argv) { return cppou::run_cli(argc, argv, std::cout, std::cerr); }
