#include "slice4d/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return slice4d::run_cli(argc, argv, std::cout, std::cerr); }
