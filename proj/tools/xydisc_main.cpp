#include <iostream>

#include "xydisc/cli.hpp"

int main(int argc, char** argv) { return xydisc::cli_main(argc, argv, std::cout, std::cerr); }
