#include <iostream>

#include "lindcorr/cli.hpp"

int main(int argc, char** argv) { return lindcorr::run_cli(argc, argv, std::cout, std::cerr); }
