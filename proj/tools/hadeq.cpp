#include "hadeq/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hadeq::run_cli(argc, argv, std::cout, std::cerr); }
