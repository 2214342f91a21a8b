#include <iostream>

#include "fbmin/cli.hpp"

int main(int argc, char** argv) { return fbmin::cli::run(argc, argv, std::cout, std::cerr); }
