#include <iostream>

#include "pvt_cli/cli.hpp"

int main(int argc, char** argv) { return pvt::cli::run(argc, argv, std::cout, std::cerr); }
