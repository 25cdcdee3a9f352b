#include <iostream>

#include "stochord/cli.hpp"

int main(int argc, char** argv) { return stochord::cli_main(argc, argv, std::cout, std::cerr); }
