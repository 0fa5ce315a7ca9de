#include <iostream>

#include "msa/cli.hpp"

int main(int argc, char** argv) { return msa::cli::run(argc, argv, std::cout, std::cerr); }
