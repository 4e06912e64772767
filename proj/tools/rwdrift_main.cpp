#include <iostream>

#include "rwdrift/cli.hpp"

int main(int argc, char** argv) { return rwdrift::cli::run(argc, argv, std::cout, std::cerr); }
