#include <iostream>

#include "charinv/cli.hpp"

int main(int argc, char** argv) { return charinv::cli::run_cli(argc, argv, std::cout, std::cerr); }
