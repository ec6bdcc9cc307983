#include <iostream>

#include "twobox/cli.hpp"

int main(int argc, char** argv) { return twobox::run_cli(argc, argv, std::cout, std::cerr); }
