#include <iostream>

#include "rlrp/cli.hpp"

int main(int argc, char** argv) { return rlrp::cli_main(argc, argv, std::cout, std::cerr); }
