#include "hdgc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hdgc::cli::main(argc, argv, std::cout, std::cerr); }
