#include <iostream>

#include "grandlp/cli.hpp"

int main(int argc, char** argv) { return grandlp::run_cli(argc, argv, std::cout, std::cerr); }
