#include <iostream>

#include "spinstar/cli.hpp"

int main(int argc, char** argv) { return spinstar::cli::run(argc, argv, std::cout, std::cerr); }
