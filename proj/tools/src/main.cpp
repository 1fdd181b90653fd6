#include <iostream>

#include "sbss/cli.hpp"

int main(int argc, char** argv) { return sbss::run_cli(argc, argv, std::cout, std::cerr); }
