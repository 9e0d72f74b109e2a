#include <iostream>

#include "snowaug/cli/commands.hpp"

int main(int argc, char** argv) { return snowaug::run_cli(argc, argv, std::cout, std::cerr); }
