#include "gpx/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gpx::cli_main(args, std::cout, std::cerr);
}
