#include <iostream>

#include "lbl/cli.hpp"

int main(int argc, char** argv) { return lbl::run_cli(argc, argv, std::cout, std::cerr); }
