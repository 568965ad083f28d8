#include <iostream>

#include "dampreg/cli.hpp"

int main(int argc, char** argv) { return dampreg::run_cli(argc, argv, std::cout, std::cerr); }
