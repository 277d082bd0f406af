#include <iostream>

#include "pxl/harness.hpp"

int main(int argc, char** argv) { return pxl::cli_main(argc, argv, std::cout, std::cerr); }
