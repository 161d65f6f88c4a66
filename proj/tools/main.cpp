#include <iostream>

#include "uavswarm/cli.hpp"

int main(int argc, char** argv) { return uavswarm::cli::run(argc, argv, std::cout, std::cerr); }
