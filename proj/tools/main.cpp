#include <iostream>

#include "squeezenoise/cli.hpp"

int main(int argc, char** argv) { return sqn::cli::run(argc, argv, std::cout, std::cerr); }
