#include <iostream>

#include "seedgraph/cli.h"

int main(int argc, char** argv) { return seedgraph::run_cli(argc, argv, std::cout, std::cerr); }
