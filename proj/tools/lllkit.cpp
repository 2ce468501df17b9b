// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "lllkit/cli.hpp"

int main(int argc, char** argv) { return lllkit::run_cli(argc, argv, std::cout, std::cerr); }
