/** \file main.cpp
 *  \brief Entry point of the `confinium` executable: forwards to cli::run().
 */
#include <iostream>
#include <string>
#include <vector>

#include "confinium/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return confinium::cli::run(args, std::cout, std::cerr);
}
