#include <iostream>

#include "ffmu/cli.hpp"

int main(int argc, char** argv) { return ffmu::cli::dispatch(argc, argv, std::cout, std::cerr); }
