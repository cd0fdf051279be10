#include <iostream>

#include "specstab/lab/runner.hpp"

int main(int argc, char** argv) { return specstab::lab::cli_main(argc, argv, std::cout, std::cerr); }
