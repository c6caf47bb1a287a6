#include "etc/io/cli.hpp"

#include <iostream>

int main(int argc, char* argv[]) { return etc::io::cli_main(argc, argv, std::cout, std::cerr); }
