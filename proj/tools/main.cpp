#include "sigtrade/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sigtrade::run(argc, argv, std::cout, std::cerr); }
